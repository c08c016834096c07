"""JSON job files for measures and shifts.

Measure specs::

    {"type": "bernoulli", "weights": {"a": "1/3", "b": "2/3"}}
    {"type": "markov", "alphabet": "abc", "v": [...], "M": [[...], ...]}
    {"type": "markov_projection", "v": [...], "M": [[...]], "letters": ["a", "b", "b"]}
    {"type": "sofic", "alphabet": "ab", "lam": [...], "phi": {"a": [[...]]}, "gamma": [...]}
    {"type": "periodic", "word": "abc"}
    {"type": "substitution", "rules": {"a": "ab", "b": "a"}, "precision": 1e-9}

Shift specs::

    {"type": "full", "alphabet": "ab"}
    {"type": "sft", "alphabet": "ab", "forbidden": ["bb"]}
    {"type": "sofic", "dfa": "path/to/file.dfa"}
    {"type": "periodic", "word": "ab"}
    {"type": "substitution", "rules": {...}}

Scalars may be strings such as "1/3" or plain numbers.  In approximate
mode every scalar is read as a float.
"""

from __future__ import annotations

import json
from pathlib import Path

from .automata import Dfa, parse_dfa_text, to_dfa
from .errors import ConfigError
from .measures import Bernoulli, Markov, Measure, SoficMeasure, SubstitutionFrequency, periodic_measure
from .numeric import parse_scalar
from .shift import FullShift, PeriodicOrbit, Sft, Sofic, Substitution, SubstitutionMorphism


def load_json(source: str | Path, what: str = "spec") -> dict:
    """Parse inline JSON (starting with "{") or read it from a file."""
    text = str(source)
    if not text.lstrip().startswith("{"):
        path = Path(text)
        if not path.exists():
            raise ConfigError(f"{what} file {text!r} does not exist")
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "type" not in data:
        raise ConfigError(f"{what} must be an object with a \"type\" field")
    return data


def _need(data, key, what):
    if key not in data:
        raise ConfigError(f"{what} of type {data['type']!r} needs a {key!r} field")
    return data[key]


def _scalars(values, exact):
    return [parse_scalar(str(v), exact) for v in values]


def measure_from_dict(data: dict, exact: bool = True) -> Measure:
    kind = data["type"]
    what = "measure"
    try:
        if kind == "bernoulli":
            w = _need(data, "weights", what)
            return Bernoulli({a: parse_scalar(str(p), exact) for a, p in w.items()})
        if kind == "markov":
            v = _scalars(_need(data, "v", what), exact)
            M = [_scalars(row, exact) for row in _need(data, "M", what)]
            return Markov(v, M, data.get("alphabet"))
        if kind == "markov_projection":
            v = _scalars(_need(data, "v", what), exact)
            M = [_scalars(row, exact) for row in _need(data, "M", what)]
            letters = _need(data, "letters", what)
            return SoficMeasure.from_markov_projection(v, M, dict(enumerate(letters)),
                                                       data.get("alphabet"))
        if kind == "sofic":
            phi = {a: [_scalars(r, exact) for r in rows]
                   for a, rows in _need(data, "phi", what).items()}
            gamma = data.get("gamma")
            return SoficMeasure.from_arrays(_need(data, "alphabet", what),
                                            _scalars(_need(data, "lam", what), exact), phi,
                                            None if gamma is None else _scalars(gamma, exact))
        if kind == "periodic":
            return periodic_measure(_need(data, "word", what), data.get("alphabet"))
        if kind == "substitution":
            return SubstitutionFrequency(SubstitutionMorphism(_need(data, "rules", what)),
                                         precision=float(data.get("precision", 1e-9)),
                                         **({"horizon": int(data["horizon"])}
                                            if "horizon" in data else {}))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad {kind} measure: {exc}") from None
    raise ConfigError(f"unknown measure type {kind!r}")


def shift_from_dict(data: dict, base: Path | None = None):
    kind = data["type"]
    what = "shift"
    if kind == "full":
        return FullShift(_need(data, "alphabet", what))
    if kind == "sft":
        return Sft(_need(data, "alphabet", what), _need(data, "forbidden", what))
    if kind == "sofic":
        return Sofic(load_language("@" + str(_resolve(_need(data, "dfa", what), base))))
    if kind == "periodic":
        return PeriodicOrbit(_need(data, "word", what), data.get("alphabet"))
    if kind == "substitution":
        kwargs = {"horizon": int(data["horizon"])} if "horizon" in data else {}
        return Substitution(SubstitutionMorphism(_need(data, "rules", what)), **kwargs)
    raise ConfigError(f"unknown shift type {kind!r}")


def _resolve(path, base):
    p = Path(path)
    return p if p.is_absolute() or base is None else base / p


def load_measure(source, exact: bool = True) -> Measure:
    return measure_from_dict(load_json(source, "measure"), exact)


def load_shift(source):
    base = None if str(source).lstrip().startswith("{") else Path(source).parent
    return shift_from_dict(load_json(source, "shift"), base)


def load_language(spec: str, alphabet=None) -> Dfa:
    """``@path`` reads the DFA text format; anything else is a regex."""
    if spec.startswith("@"):
        path = Path(spec[1:])
        if not path.exists():
            raise ConfigError(f"DFA file {str(path)!r} does not exist")
        try:
            return parse_dfa_text(path.read_text())
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    if alphabet is None:
        raise ConfigError("a regex language needs an alphabet (give --measure or --shift)")
    return to_dfa(spec, alphabet)
