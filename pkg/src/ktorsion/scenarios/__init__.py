"""Concrete families of varieties and the regression suite built on them."""

from .bounds import conic_bound_N, sb_bound_N
from .four_conics import FourConics, FourConicsVerdict, admissible_four_conics, four_conics_classify
from .keysb import KeySBInstance, KeySBResult, keysb_check, keysb_expand, keysb_sweep
from .models import Analysis, InadmissibleConfig, analyze_index, analyze_quadric
from .quadrics import QuadricVerdict, classify_quadric, three_quadric_configs, two_quadric_configs
from .suite import Scenario, ScenarioResult, run_suite, suite_json, suite_table

__all__ = [
    "Analysis", "FourConics", "FourConicsVerdict", "InadmissibleConfig", "KeySBInstance",
    "KeySBResult", "QuadricVerdict", "Scenario", "ScenarioResult", "admissible_four_conics",
    "analyze_index", "analyze_quadric", "classify_quadric", "conic_bound_N",
    "four_conics_classify", "keysb_check", "keysb_expand", "keysb_sweep", "run_suite",
    "sb_bound_N", "suite_json", "suite_table", "three_quadric_configs", "two_quadric_configs",
]
