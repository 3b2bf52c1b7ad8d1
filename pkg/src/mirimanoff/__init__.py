"""Fixed-precision p-adic algebra for Mirimanoff power series and Iwasawa series."""
from .errors import PadicError
from .padic import PadicCtx, PadicInt, angle, gamma_index, iwasawa_log, teichmuller
from .unramified import UnramCtx, UnramElem, make_splitting_ctx, roots_of_unity
from .iwasawa import IwasawaPoly, MuLambda, lemma2_identities, omega_poly
from .characters import DeltaChar, DirichletChar, enumerate_even_nontrivial, dirichlet_character
from .series import mirimanoff_poly, mirimanoff_series, u_series, phi
from .lfunction import (
    BernoulliOracle,
    G_series,
    corollary1_check,
    f_series,
    g_series,
    lambda_rows,
    theorem5_check,
    theorem6_check,
    v_element,
)
from .cyclotomic import CycloCtx, CycloElem, lemma5_trace, alpha_class_search

__version__ = "0.1.0"

__all__ = [
    "PadicError", "PadicCtx", "PadicInt", "angle", "gamma_index", "iwasawa_log", "teichmuller",
    "UnramCtx", "UnramElem", "make_splitting_ctx", "roots_of_unity",
    "IwasawaPoly", "MuLambda", "lemma2_identities", "omega_poly",
    "DeltaChar", "DirichletChar", "enumerate_even_nontrivial", "dirichlet_character",
    "mirimanoff_poly", "mirimanoff_series", "u_series", "phi",
    "BernoulliOracle", "G_series", "corollary1_check", "f_series", "g_series", "lambda_rows",
    "theorem5_check", "theorem6_check", "v_element",
    "CycloCtx", "CycloElem", "lemma5_trace", "alpha_class_search",
]
