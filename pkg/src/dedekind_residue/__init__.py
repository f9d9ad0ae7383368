"""Residues of Dedekind zeta functions from prime splitting, with GRH error bounds."""
from .numfield import IntPolynomial, InvalidFieldError, NumberFieldProfile, make_field, parse_poly, rationals
from .splitting import (LocalSplitting, SplittingTable, UnsupportedIndexDivisor, enumerate_prime_powers,
                        sieve_primes, split_prime, split_table)
from .estimators import EstimateResult, bach_estimator, estimate, f_estimator, schoof_estimator
from .bounds import beta, corollary_bound, minimal_X, table1, thm1_bound, thm2_bound, digamma, BoundInputs

__version__ = "0.1.0"
