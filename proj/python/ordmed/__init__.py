"""Exact ordered k-median pipelines. Costs come back as Fraction."""

import json
from fractions import Fraction

from . import _ordmed

InvalidInstance = _ordmed.InvalidInstance


def _text(values):
    return [str(Fraction(v)) for v in values]


def _fraction(value):
    return Fraction(value) if isinstance(value, (int, str)) else Fraction(str(value))


def _doc(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def ordered_cost(weights, costs):
    return Fraction(_ordmed.ordered_cost(_text(weights), _text(costs)))


def conic_cost(weights, costs):
    return Fraction(_ordmed.conic_cost(_text(weights), _text(costs)))


def generate(variant, count=1, seed=1, top_ell=False):
    """Random instances as JSON-ready dicts."""
    return [json.loads(d) for d in _ordmed.generate(variant, count, seed, top_ell)]


def optimum(instance):
    out = json.loads(_ordmed.optimum(_doc(instance)))
    out["value"] = _fraction(out["value"])
    return out


def solve(instance, samples=200, seed=1):
    out = json.loads(_ordmed.solve(_doc(instance), samples, seed))
    out["cost"] = _fraction(out["cost"])
    return out


__all__ = ["InvalidInstance", "conic_cost", "generate", "optimum", "ordered_cost", "solve"]
