"""Elliptic-curve primality tests for three special integer forms.

The numbers F_k = 2^(2^k)+1, G_k = 2^(2k+1)+2^(k+1)+1, and
H_k = 2^(2k+1)-2^(k+1)+1 all split as a^2 + b^2, which makes the curve
y^2 = x^3 - m*x (with its extra endomorphism i: (x, y) -> (-x, i*y))
usable as a primality certificate: iterate the x-only action of
eta = 1 + i from a chosen start and look at where the chain lands.

Layout:
    bignat     limb arithmetic (numpy arrays, optional numba kernels)
    curve      x-only and affine arithmetic on y^2 = x^3 - m*x
    primality  the test drivers and parameter tables
    oracle     independent ground truth on Python ints, plus the
               verification suites that compare both routes
    cli        `etaprime` command: test / verify / bench
"""

from ._kernels import BACKEND
from .bignat import (
    Form,
    FormModulus,
    Modulus,
    Natural,
    NonInvertible,
    ONE,
    ZERO,
    build_modulus,
    gcd,
    inv_mod,
    jacobi,
    pow_mod,
    special_reduce,
)
from .curve import (
    AffinePoint,
    CurveParams,
    FactorFound,
    Finite,
    INFINITY,
    QuarticUnit,
    ZERO_POINT,
    affine_add,
    apply_i,
    double_step,
    eta_step,
    i_unit,
    on_curve,
    scalar_mul,
    to_x_state,
)
from .primality import (
    SearchExhausted,
    TestParams,
    TestReport,
    Verdict,
    fermat_double_test,
    fermat_eta_test,
    gk_test,
    hk_test,
    pepin_test,
    run_test,
    select_params,
)

__version__ = "0.1.0"

__all__ = [
    "AffinePoint",
    "BACKEND",
    "CurveParams",
    "FactorFound",
    "Finite",
    "Form",
    "FormModulus",
    "INFINITY",
    "Modulus",
    "Natural",
    "NonInvertible",
    "ONE",
    "QuarticUnit",
    "SearchExhausted",
    "TestParams",
    "TestReport",
    "Verdict",
    "ZERO",
    "ZERO_POINT",
    "affine_add",
    "apply_i",
    "build_modulus",
    "double_step",
    "eta_step",
    "fermat_double_test",
    "fermat_eta_test",
    "gcd",
    "gk_test",
    "hk_test",
    "i_unit",
    "inv_mod",
    "jacobi",
    "on_curve",
    "pepin_test",
    "pow_mod",
    "run_test",
    "scalar_mul",
    "select_params",
    "special_reduce",
    "to_x_state",
]
