"""Implicit and averaged stochastic gradient estimation for GLMs and M-estimators."""
from .batch import proximal_gradient
from .data import (ArraySource, CsvSource, SimulatedDataset, simulate_huber,
                   simulate_lasso, stream_chunks, write_dataset)
from .diagnostics import (classification_error, convergence_check, mse_to_truth,
                          predict)
from .errors import (ConvergenceFailureError, DivergenceError, InvalidInputError,
                     NumericOverflowError, SGDError, SolverFailureError)
from .implicit import (ImplicitConfig, ScaledGradientResult, implicit_step_vector,
                       implicit_update,
                       search_bracket, solve_scale)
from .models import (ObjectiveSpec, Observation, Penalty, lprime, penalty_gradient,
                     penalty_value, transfer)
from .optimizers import (FitConfig, FitResult, OptimizerState, explicit_step, fit,
                         implicit_step, momentum_step, nag_step, update_average)
from .path import PathConfig, lambda_grid, run_path
from .schedules import (AdaptiveState, OneDimSchedule, ScheduleConfig, adagrad_step,
                        fisher_step, onedim_rate, rmsprop_step)

__version__ = "0.1.0"
