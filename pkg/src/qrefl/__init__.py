"""Exact reflection-equation computations for U_q(sl_n) on its vector representation."""

from qrefl.scalar import ParseError, Scalar, parse_scalar, print_scalar, q_pow, s_var

__all__ = ["ParseError", "Scalar", "parse_scalar", "print_scalar", "q_pow", "s_var"]
