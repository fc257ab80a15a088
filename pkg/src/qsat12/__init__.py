"""Random (1,2)-QSAT toolkit."""

from .counting import (
    count_bicycles,
    count_snakes,
    d_pure_sequences,
    expected_bicycles,
    expected_snakes,
    monte_carlo_snake_count,
    stirling2,
)
from .evaluator import evaluate, find_falsifying, naive_evaluate, sat_2cnf
from .formula import Clause12, Cnf2, Formula12, Literal, x, y
from .generator import GenConfig, generate, sample_binomial, sample_uniform
from .qdimacs import read_qdimacs, write_qdimacs
from .reduction import Cnf3, brute_sat, psi, reduce_3sat
from .threshold import H, critical_ratio, g, solve_x0

__version__ = "0.1.0"
