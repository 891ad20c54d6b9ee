"""Loading states and Hamiltonians from JSON fixtures or named presets.

Presets (arguments separated by spaces or colons)::

    states:        qubit-plus, qubit-sigma-z, noisy-plus W, maximally-mixed D,
                   random-full-rank D SEED, gibbs
    hamiltonians:  qubit-sigma-z, qubit-sigma-x, ladder D, zero D, random D SEED

``gibbs`` needs the Hamiltonian and inverse temperature of the run.
"""

from __future__ import annotations

import ast
import json
import math
import operator
import re
from pathlib import Path

import numpy as np

from .ensembles import random_density_matrix, random_hamiltonian
from .errors import ConfigInvalid, CoherenceCostError, FixtureUnreadable
from .linalg import from_json
from .states import DensityMatrix, Hamiltonian, gibbs_state, pure_state

_CONSTANTS = {"pi": math.pi, "e": math.e, "ln2": math.log(2), "tau": math.tau}
_FUNCS = {"ln": math.log, "log": math.log, "sqrt": math.sqrt, "exp": math.exp}
_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def parse_number(text) -> float:
    """Evaluate a plain or symbolic number such as ``pi/4``, ``ln2`` or ``ln(2)``."""
    if isinstance(text, (int, float)):
        return float(text)

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _CONSTANTS:
            return _CONSTANTS[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id in _FUNCS
            and len(node.args) == 1
        ):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError

    try:
        return float(ev(ast.parse(str(text).strip(), mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError):
        raise ConfigInvalid(f"cannot parse number {text!r}") from None


def _read_matrix(path: Path) -> np.ndarray:
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureUnreadable(f"{path}: {exc}") from None
    return from_json(obj)


def _tokens(source: str) -> list[str]:
    return [t for t in re.split(r"[\s:]+", source.strip()) if t]


def _int_arg(tokens, i, name) -> int:
    try:
        return int(tokens[i])
    except (IndexError, ValueError):
        raise ConfigInvalid(f"preset {name!r} needs an integer argument") from None


def load_hamiltonian(source: str) -> Hamiltonian:
    path = Path(source)
    if path.suffix == ".json" or path.is_file():
        return Hamiltonian(_read_matrix(path))
    tok = _tokens(source)
    name = tok[0] if tok else ""
    if name == "qubit-sigma-z":
        return Hamiltonian(np.diag([1.0, -1.0]))
    if name == "qubit-sigma-x":
        return Hamiltonian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    if name == "ladder":
        return Hamiltonian(np.diag(np.arange(_int_arg(tok, 1, name), dtype=float)))
    if name == "zero":
        d = _int_arg(tok, 1, name)
        return Hamiltonian(np.zeros((d, d)))
    if name == "random":
        d, seed = _int_arg(tok, 1, name), _int_arg(tok, 2, name)
        return random_hamiltonian(d, np.random.default_rng(seed))
    raise ConfigInvalid(f"unknown Hamiltonian source {source!r}")


def load_state(source: str, h: Hamiltonian | None = None, beta: float | None = None) -> DensityMatrix:
    path = Path(source)
    if path.suffix == ".json" or path.is_file():
        try:
            return DensityMatrix(_read_matrix(path))
        except CoherenceCostError as exc:
            if isinstance(exc, FixtureUnreadable):
                raise
            raise type(exc)(f"{path}: {exc}") from None
    tok = _tokens(source)
    name = tok[0] if tok else ""
    if name == "qubit-plus":
        return pure_state([1, 1])
    if name == "qubit-sigma-z":
        return pure_state([1, 0])
    if name == "noisy-plus":
        if len(tok) < 2:
            raise ConfigInvalid("preset 'noisy-plus' needs a weight")
        w = parse_number(tok[1])
        if not 0 <= w <= 1:
            raise ConfigInvalid("noisy-plus weight must lie in [0, 1]")
        return DensityMatrix(w * pure_state([1, 1]).matrix + (1 - w) * np.eye(2) / 2)
    if name == "maximally-mixed":
        d = _int_arg(tok, 1, name)
        return DensityMatrix(np.eye(d) / d)
    if name == "random-full-rank":
        d, seed = _int_arg(tok, 1, name), _int_arg(tok, 2, name)
        return random_density_matrix(d, np.random.default_rng(seed))
    if name == "gibbs":
        if h is None or beta is None:
            raise ConfigInvalid("preset 'gibbs' needs a Hamiltonian and beta")
        return gibbs_state(h, beta)
    raise ConfigInvalid(f"unknown state source {source!r}")
