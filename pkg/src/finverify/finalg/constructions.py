"""Kernels, images, coequalizers, pullbacks, image factorizations."""
from __future__ import annotations

from ..errors import DEFAULT_BUDGET
from .modules import (
    FiniteModule,
    LinearMap,
    SubmoduleHandle,
    product_module,
    quotient_module,
    submodule_module,
    submodule_span,
)


def kernel(f: LinearMap) -> SubmoduleHandle:
    return SubmoduleHandle(ambient=f.dom,
                           mask=tuple(v == 0 for v in f.table))


def image(f: LinearMap) -> SubmoduleHandle:
    hit = set(f.table)
    return SubmoduleHandle(ambient=f.cod,
                           mask=tuple(x in hit for x in range(f.cod.size)))


def image_factorization(f: LinearMap):
    """Split f as a surjection onto its image followed by the inclusion."""
    img, incl = submodule_module(image(f), name=f"im({f.dom.name})")
    pos = {v: i for i, v in enumerate(incl.table)}
    surj = LinearMap(f.dom, img, tuple(pos[v] for v in f.table))
    return img, surj, incl


def coequalizer(f: LinearMap, g: LinearMap):
    """Quotient of the common codomain by the span of all f(x) - g(x).

    Returns (quotient module, projection).
    """
    assert f.dom == g.dom and f.cod == g.cod
    cod = f.cod
    diff = [cod.add[f.table[x]][cod.neg[g.table[x]]] for x in range(f.dom.size)]
    return quotient_module(cod, submodule_span(cod, diff),
                           name=f"coeq({cod.name})")


def pullback(f: LinearMap, g: LinearMap, budget=DEFAULT_BUDGET):
    """Pairs (a, b) with f(a) = g(b), as a module with its two projections."""
    assert f.cod == g.cod
    prod, p1, p2 = product_module(f.dom, g.dom, budget=budget)
    mask = tuple(f.table[p1.table[i]] == g.table[p2.table[i]]
                 for i in range(prod.size))
    sub, incl = submodule_module(SubmoduleHandle(ambient=prod, mask=mask),
                                 name=f"pb({f.dom.name},{g.dom.name})")
    return sub, incl.then(p1), incl.then(p2)
