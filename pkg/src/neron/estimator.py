"""scikit-learn style front end.

``fit`` builds the smooth algebra for a problem; ``transform`` factors
morphisms through it and ``inverse_transform`` turns parameter vectors back
into morphisms.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from neron.desing import (
    factor_morphism, neron_desing, parametrize_morphisms, uniform_desing, uniform_desing_dim1,
)
from neron.polyring import Jet, Poly, parse_poly
from neron.problem import ALGORITHMS, Problem, parse_problem, parse_problem_text


def check_problem(X):
    """Accept a :class:`Problem`, a path, or problem text."""
    if isinstance(X, Problem):
        return X
    if isinstance(X, str):
        if "\n" in X or "=" in X:
            return parse_problem_text(X)
        return parse_problem(X)
    raise TypeError(f"expected a Problem, a path or problem text, got {type(X).__name__}")


def check_morphism(v, ring, yvars, prec):
    """Normalize one morphism to ``{Y: Jet}``.

    ``v`` may be a mapping from variable names or a sequence ordered like
    ``yvars``; entries may be jets, polynomials or polynomial text.
    """
    if isinstance(v, dict):
        missing = [y for y in yvars if y not in v]
        if missing:
            raise ValueError(f"morphism misses {missing[0]}")
        items = [v[y] for y in yvars]
    else:
        items = list(v)
        if len(items) != len(yvars):
            raise ValueError(f"expected {len(yvars)} images, got {len(items)}")
    out = {}
    xring = ring.subring(ring.base_names())
    for y, item in zip(yvars, items):
        if isinstance(item, Jet):
            jet = item
        elif isinstance(item, Poly):
            jet = Jet(item, prec)
        elif isinstance(item, (str, int)):
            jet = Jet(parse_poly(str(item), xring), prec)
        else:
            raise TypeError(f"cannot read an image of type {type(item).__name__}")
        if any(n not in xring.names for n in jet.value.variables()):
            raise ValueError(f"image of {y} must involve base variables only")
        out[y] = jet
    return out


def apply_caps(caps):
    from neron.groebner import DEFAULT_CAPS
    old = dict(DEFAULT_CAPS)
    DEFAULT_CAPS.update(caps or {})
    return old


class NeronDesingularizer(BaseEstimator, TransformerMixin):
    """Desingularize a problem, then factor or parametrize morphisms.

    Parameters left as ``None`` fall back to the values in the problem file.
    """

    def __init__(self, algorithm=None, precision=None, k=None, c=None, budget=None,
                 hints=None, mode="cubes"):
        self.algorithm = algorithm
        self.precision = precision
        self.k = k
        self.c = c
        self.budget = budget
        self.hints = hints
        self.mode = mode

    def _settings(self, prob):
        algorithm = self.algorithm or prob.algorithm or "neron"
        if algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        precision = self.precision or prob.precision
        if precision is None:
            raise ValueError("a precision is required")
        hints = dict(prob.hints)
        hints.update(self.hints or {})
        return algorithm, precision, hints

    def fit(self, X, y=None):
        prob = check_problem(X)
        algorithm, precision, hints = self._settings(prob)
        k = self.k if self.k is not None else prob.k
        c = self.c if self.c is not None else prob.c
        old = apply_caps(prob.caps)
        try:
            if algorithm == "neron":
                if prob.dim is None:
                    raise ValueError("the neron algorithm needs the dimension of A")
                pres = neron_desing(prob.algebra(precision), prob.dim, precision,
                                    budget=self.budget or prob.budget, hints=hints)
            elif algorithm == "uniform":
                systems = prob.param_systems()
                if prob.dim is not None and systems and len(systems) != prob.dim:
                    raise ValueError(f"uniform needs {prob.dim} parameter systems, got {len(systems)}")
                if not systems:
                    raise ValueError("uniform needs parameter systems")
                pres = uniform_desing(prob.algebra(precision), prob.yprime(), systems,
                                      k=k, c=c, precision=precision)
            else:
                systems = prob.param_systems()
                pres = uniform_desing_dim1(prob.algebra(precision), prob.yprime(),
                                           systems[0] if systems else None,
                                           k=k, c=c, precision=precision)
        finally:
            apply_caps(old)
        self.problem_ = prob
        self.presentation_ = pres
        self.certificate_ = pres.certificate.to_dict(pres.ring)
        self.n_params_ = sum(len(t) for t in pres.data.tails) if pres.data else 0
        return self

    def transform(self, X):
        """Factor each morphism of ``X`` through the fitted algebra."""
        check_is_fitted(self, "presentation_")
        pres = self.presentation_
        if tuple(pres.yvars) != tuple(self.problem_.yvars):
            raise ValueError("factoring new morphisms needs a uniform presentation")
        prec = pres.precision
        out = []
        for v in X:
            vp = check_morphism(v, self.problem_.ring, self.problem_.yvars, prec)
            vp = {y: Jet(j.value.coerce(pres.ring), j.prec) for y, j in vp.items()}
            out.append(factor_morphism(pres, vp, mode=self.mode, k=self.k or self.problem_.k))
        return out

    def inverse_transform(self, P):
        """Morphisms ``B -> A'`` induced by parameter vectors (one jet per tail)."""
        check_is_fitted(self, "presentation_")
        pres = self.presentation_
        xring = pres.ring.subring(pres.ring.base_names())
        out = []
        for params in P:
            params = [parse_poly(p, xring) if isinstance(p, str) else p for p in params]
            if len(params) != self.n_params_:
                raise ValueError(f"expected {self.n_params_} parameters, got {len(params)}")
            w = parametrize_morphisms(pres, params)
            out.append({y: w[y] for y in self.problem_.yvars})
        return out


__all__ = ["NeronDesingularizer", "check_problem", "check_morphism", "apply_caps"]
