"""Multi-objective structure search for generalized additive models."""

from .baselines import baseline_gam_spec, fit_cart, predict_cart
from .complexity import ComplexityScore, complexity_penalty, sparsity_score, uncertainty_score
from .dataset import Dataset, DataError, load_csv, make_split, make_synthetic
from .evaluation import CvPlan, Objectives, evaluate, make_cv_plan, rmse
from .gam import FitError, FittedGam, ModelSpec, TermKind, TermSpec, fit, partial_dependence, predict
from .genome import Chromosome, adaptive_rate, mutate, smart_init, uniform_crossover
from .nsga2 import GaConfig, Individual, crowding_distance, dominates, fast_nondominated_sort, run
from .pareto import FrontSelection, select_representatives

__version__ = "0.1.0"

__all__ = [
    "Chromosome",
    "ComplexityScore",
    "CvPlan",
    "DataError",
    "Dataset",
    "FitError",
    "FittedGam",
    "FrontSelection",
    "GaConfig",
    "Individual",
    "ModelSpec",
    "Objectives",
    "TermKind",
    "TermSpec",
    "adaptive_rate",
    "baseline_gam_spec",
    "complexity_penalty",
    "crowding_distance",
    "dominates",
    "evaluate",
    "fast_nondominated_sort",
    "fit",
    "fit_cart",
    "load_csv",
    "make_cv_plan",
    "make_split",
    "make_synthetic",
    "mutate",
    "partial_dependence",
    "predict",
    "predict_cart",
    "rmse",
    "run",
    "select_representatives",
    "smart_init",
    "sparsity_score",
    "uncertainty_score",
    "uniform_crossover",
]
