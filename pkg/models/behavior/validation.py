"""
Load-time validation of JSON model descriptions.

Date: 2026-10-18

Model descriptions come from --config files. Every check here only looks
at the shape of the raw dictionaries; numerical invariants (probabilities
summing to 1, kernel symmetry) are enforced by the domain constructors.

Problems are collected and reported together, so a user fixing a config
sees everything that is wrong in one go.
"""

from __future__ import annotations

from typing import Any, Dict, List

from models.behavior.errors import ConfigurationError

CHAOS_MODELS = ("gauss", "poisson")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_matrix(value: Any) -> bool:
    return (
        isinstance(value, list)
        and bool(value)
        and all(isinstance(row, list) and len(row) == len(value) and all(_is_number(v) for v in row) for row in value)
    )


def _is_vector(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(_is_number(v) for v in value)


def raise_if_problems(what: str, problems: List[str]) -> None:
    if problems:
        raise ConfigurationError(f"Invalid {what}: " + "; ".join(problems), problems)


def _check_family(defn: Dict[str, Any], problems: List[str]) -> None:
    if not isinstance(defn["family"], str):
        problems.append("'family' must be a string")
    if "params" in defn and not isinstance(defn["params"], dict):
        problems.append("'params' must be an object")


def validate_product_definition(defn: Any) -> None:
    """
    Accepted shapes:
    - {"family": str, "n": int, "params": {...}}
    - {"factors": [{"support": [...], "probs": [...]}, ...] or
       "iid": {"factor": {...}, "n": int},
       "kernel": {"table": nested list} or {"terms": [{"J": [...], "coef": x}, ...]},
       "d": int, "nu": float}
    """
    problems: List[str] = []
    if not isinstance(defn, dict):
        raise_if_problems("product model", ["definition must be a JSON object"])
    if "family" in defn:
        _check_family(defn, problems)
        if not isinstance(defn.get("n"), int) or defn.get("n", 0) < 1:
            problems.append("'n' must be a positive integer")
        raise_if_problems("product model", problems)
        return

    factors = defn.get("factors")
    iid = defn.get("iid")
    if factors is None and iid is None:
        problems.append("need 'family', 'factors' or 'iid'")
    if factors is not None:
        if not isinstance(factors, list) or not factors:
            problems.append("'factors' must be a non-empty list")
        else:
            for i, f in enumerate(factors):
                problems.extend(_factor_problems(f, f"factors[{i}]"))
    if iid is not None:
        if not isinstance(iid, dict):
            problems.append("'iid' must be an object")
        else:
            problems.extend(_factor_problems(iid.get("factor"), "iid.factor"))
            if not isinstance(iid.get("n"), int) or iid.get("n", 0) < 1:
                problems.append("'iid.n' must be a positive integer")

    kernel = defn.get("kernel")
    if not isinstance(kernel, dict) or not ({"table", "terms"} & kernel.keys()):
        problems.append("'kernel' must be an object with 'table' or 'terms'")
    elif "terms" in kernel:
        terms = kernel["terms"]
        if not isinstance(terms, list) or not terms:
            problems.append("'kernel.terms' must be a non-empty list")
        else:
            for i, t in enumerate(terms):
                if not isinstance(t, dict) or not isinstance(t.get("J"), list) or not _is_number(t.get("coef")):
                    problems.append(f"kernel.terms[{i}] needs a list 'J' and a number 'coef'")
    if not isinstance(defn.get("d"), int) or defn.get("d", 0) < 1:
        problems.append("'d' must be a positive integer")
    if not _is_number(defn.get("nu")) or defn.get("nu", 0) <= 0:
        problems.append("'nu' must be a positive number")
    raise_if_problems("product model", problems)


def _factor_problems(f: Any, where: str) -> List[str]:
    if not isinstance(f, dict):
        return [f"{where} must be an object"]
    out = []
    support, probs = f.get("support"), f.get("probs")
    if not isinstance(support, list) or not support:
        out.append(f"{where}.support must be a non-empty list")
    if not _is_vector(probs):
        out.append(f"{where}.probs must be a non-empty list of numbers")
    if isinstance(support, list) and isinstance(probs, list) and len(support) != len(probs):
        out.append(f"{where}: support and probs differ in length")
    return out


def validate_chaos_definition(model: str, defn: Any) -> None:
    """
    Accepted shapes:
    - {"family": str, "params": {...}}
    - gauss: {"dim": int, "order": 1|2, "kernel": [...], "mixture": [{"order", "kernel"}]}
    - poisson: {"mu": [...], "order": 1|2, "kernel": [...], "mixture": [...]}
    """
    problems: List[str] = []
    if model not in CHAOS_MODELS:
        raise_if_problems("chaos model", [f"model must be one of {', '.join(CHAOS_MODELS)}, got '{model}'"])
    if not isinstance(defn, dict):
        raise_if_problems("chaos model", ["definition must be a JSON object"])
    if "family" in defn:
        _check_family(defn, problems)
        raise_if_problems(f"{model} chaos model", problems)
        return

    if model == "gauss" and (not isinstance(defn.get("dim"), int) or defn.get("dim", 0) < 1):
        problems.append("'dim' must be a positive integer")
    if model == "poisson" and not _is_vector(defn.get("mu")):
        problems.append("'mu' must be a non-empty list of numbers")
    levels = [("", defn)] + [(f"mixture[{i}].", m) for i, m in enumerate(defn.get("mixture", []))]
    for prefix, level in levels:
        if not isinstance(level, dict):
            problems.append(f"{prefix or 'level'} must be an object")
            continue
        order = level.get("order")
        if order not in (1, 2):
            problems.append(f"'{prefix}order' must be 1 or 2")
        elif order == 1 and not _is_vector(level.get("kernel")):
            problems.append(f"'{prefix}kernel' must be a list of numbers for order 1")
        elif order == 2 and not _is_matrix(level.get("kernel")):
            problems.append(f"'{prefix}kernel' must be a square matrix for order 2")
    raise_if_problems(f"{model} chaos model", problems)
