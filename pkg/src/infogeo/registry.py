"""Built-in model instances and INI-file configuration loading."""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field

import numpy as np

from . import coherent, discrete, qubit
from .core import ModelDescriptor


@dataclass(frozen=True)
class ModelHandle:
    """A named model plus whatever the canonical engine needs.

    ``descriptor`` is None for the summary-only kinds (regression,
    sphere) that have questions and entropy but no canonical family
    wired into the engine.
    """

    kind: str
    name: str
    descriptor: ModelDescriptor | None
    options: dict = field(default_factory=dict)


def qubit_instance(membership_margin: float = 1e-12,
                   chart_margin: float = 1e-9) -> ModelHandle:
    desc = qubit.as_descriptor(membership_margin=membership_margin,
                               chart_margin=chart_margin)
    return ModelHandle(kind="qubit", name="qubit", descriptor=desc,
                       options={"membership_margin": membership_margin,
                                "chart_margin": chart_margin})


def coherent_instance(r: float = 1.0, hbar: float = 1.0, nmax: int = 64,
                      box: float | None = None) -> ModelHandle:
    constants = coherent.PhaseConstants(r=r, hbar=hbar)
    if box is None:
        # wide enough that |U| = max(r^2, hbar^2/r^2) |theta| stays
        # interior for the parameter magnitudes exercised by checks
        box = 16.0 * max(r ** 2, hbar ** 2 / r ** 2, 1.0)
    desc = coherent.as_descriptor(constants, nmax=nmax, box_halfwidth=box)
    return ModelHandle(kind="coherent", name=desc.name, descriptor=desc,
                       options={"constants": constants, "nmax": nmax, "box": box})


def discrete_instance(prior, hamiltonians, name: str | None = None) -> ModelHandle:
    family = discrete.DiscreteFamily(prior=np.asarray(prior, dtype=float),
                                     hamiltonians=np.asarray(hamiltonians, dtype=float))
    desc = discrete.as_descriptor(family)
    return ModelHandle(kind="discrete", name=name or desc.name, descriptor=desc,
                       options={"family": family})


def regression_instance() -> ModelHandle:
    return ModelHandle(kind="regression", name="regression", descriptor=None)


def sphere_instance() -> ModelHandle:
    return ModelHandle(kind="sphere", name="sphere", descriptor=None)


def canonical_instances() -> dict[str, ModelHandle]:
    """The five reference instances used throughout the checks."""
    return {
        "qubit": qubit_instance(),
        "coherent": coherent_instance(r=1.0, hbar=1.0),
        "coherent2": coherent_instance(r=2.0, hbar=0.5),
        "discrete2": discrete_instance(np.ones(2), [[0.0, 1.0]], name="discrete2"),
        "discrete3": discrete_instance(np.ones(3), [[0.0, 1.0, 2.0]], name="discrete3"),
    }


BUILTIN_NAMES = ("qubit", "coherent", "coherent2", "discrete2", "discrete3",
                 "regression", "sphere")


def get_model(name: str) -> ModelHandle:
    """Handle for a built-in name.  Raises KeyError for unknown names."""
    if name == "regression":
        return regression_instance()
    if name == "sphere":
        return sphere_instance()
    table = canonical_instances()
    if name not in table:
        raise KeyError(f"unknown model {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return table[name]


def _parse_matrix(text: str) -> np.ndarray:
    rows = [row.strip() for row in text.split(";") if row.strip()]
    return np.array([[float(v) for v in row.replace(",", " ").split()]
                     for row in rows])


def _parse_vector(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.replace(",", " ").split()])


def load_config(path: str) -> ModelHandle:
    """Build a model from an INI file.

    The [model] section names the kind; a section of the same name holds
    its settings:

        [model]
        type = discrete

        [discrete]
        prior = 1, 1, 1
        hamiltonians = 0, 1, 2

    Coherent settings are r, hbar, nmax, box; qubit settings are
    membership_margin and chart_margin; discrete rows of the observable
    matrix are separated by ";".
    """
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as fh:
        parser.read_file(fh)
    if not parser.has_section("model") or not parser.has_option("model", "type"):
        raise ValueError("config needs a [model] section with a 'type' key")
    kind = parser.get("model", "type").strip().lower()

    if kind == "qubit":
        margin = parser.getfloat("qubit", "membership_margin", fallback=1e-12)
        chart = parser.getfloat("qubit", "chart_margin", fallback=1e-9)
        return qubit_instance(membership_margin=margin, chart_margin=chart)
    if kind == "coherent":
        r = parser.getfloat("coherent", "r", fallback=1.0)
        hbar = parser.getfloat("coherent", "hbar", fallback=1.0)
        nmax = parser.getint("coherent", "nmax", fallback=64)
        box = (parser.getfloat("coherent", "box")
               if parser.has_option("coherent", "box") else None)
        return coherent_instance(r=r, hbar=hbar, nmax=nmax, box=box)
    if kind == "discrete":
        if not parser.has_section("discrete"):
            raise ValueError("discrete config needs a [discrete] section")
        prior = _parse_vector(parser.get("discrete", "prior"))
        ham = _parse_matrix(parser.get("discrete", "hamiltonians"))
        return discrete_instance(prior, ham)
    if kind == "regression":
        handle = regression_instance()
        if parser.has_option("regression", "data"):
            handle.options["data"] = parser.get("regression", "data")
        return handle
    if kind == "sphere":
        return sphere_instance()
    raise ValueError(f"unknown model type {kind!r}")
