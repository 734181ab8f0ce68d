"""Extremal bandlimited functions, Gauss quadrature at Bessel zeros and
positive definiteness for the Hankel transform."""
from .bessel import Order, ZeroTable, b_const, j_norm, j_norm_derivative, zeros
from .eigenpoly import EigenPolynomial, build_p, count_zeros, thm_hn_function
from .extremal import ExtremalFunction, Variant, last_sign_change, logan_product, uncertainty_product
from .hankel import Measure, RadialProfile, hankel_transform, translate
from .jacobi_limit import JacobiPoly, divided_poly, jacobi_eval, mehler_heine_check
from .quadrature import apply_gauss, apply_radau, gauss_rule, radau_rule

__version__ = "0.1.0"

__all__ = [
    "Order", "ZeroTable", "b_const", "j_norm", "j_norm_derivative", "zeros",
    "EigenPolynomial", "build_p", "count_zeros", "thm_hn_function",
    "ExtremalFunction", "Variant", "last_sign_change", "logan_product", "uncertainty_product",
    "Measure", "RadialProfile", "hankel_transform", "translate",
    "JacobiPoly", "divided_poly", "jacobi_eval", "mehler_heine_check",
    "apply_gauss", "apply_radau", "gauss_rule", "radau_rule",
]
