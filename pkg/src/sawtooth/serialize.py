"""JSON and CSV formats for functions, networks and datasets.

Rationals are written as lowest-terms strings (``"3/4"``, ``"-2"``).  Output
is canonical: serializing, parsing and serializing again gives identical
bytes.
"""

from __future__ import annotations

import csv
import io
import json

from .alternating import LabeledDataset
from .network import NetworkSpec, Neuron, RecurrentSpec, relu, stump
from .pwl import PwlFunction, format_rational, rational


class FormatError(ValueError):
    """Input file does not match the expected schema."""


def _q(value, what):
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise FormatError(f"{what}: expected a rational string, got {value!r}")
    try:
        return rational(value)
    except (ValueError, TypeError) as exc:
        raise FormatError(f"{what}: {exc}") from None


# -- PwlFunction ---------------------------------------------------------------


def pwl_to_dict(f: PwlFunction) -> dict:
    d = {
        "breakpoints": [format_rational(b) for b in f.breakpoints],
        "pieces": [
            {"slope": format_rational(p.slope), "intercept": format_rational(p.intercept)}
            for p in f.pieces
        ],
    }
    if f.point_values:
        # only present for functions whose value at a breakpoint is not the right piece's
        d["point_values"] = {format_rational(x): format_rational(v) for x, v in f.point_values.items()}
    return d


def pwl_from_dict(d) -> PwlFunction:
    if not isinstance(d, dict):
        raise FormatError("function must be a JSON object")
    try:
        bps = d["breakpoints"]
        pieces = d["pieces"]
    except KeyError as exc:
        raise FormatError(f"missing key {exc}") from None
    if not isinstance(bps, list) or not isinstance(pieces, list):
        raise FormatError("breakpoints and pieces must be lists")
    if len(pieces) != len(bps) + 1:
        raise FormatError(f"{len(bps)} breakpoints need {len(bps) + 1} pieces, got {len(pieces)}")
    parsed = []
    for i, p in enumerate(pieces):
        if not isinstance(p, dict) or "slope" not in p or "intercept" not in p:
            raise FormatError(f"piece {i} needs slope and intercept")
        parsed.append((_q(p["slope"], f"piece {i} slope"), _q(p["intercept"], f"piece {i} intercept")))
    points = {
        _q(x, "point_values key"): _q(v, "point_values value")
        for x, v in (d.get("point_values") or {}).items()
    }
    try:
        return PwlFunction([_q(b, "breakpoint") for b in bps], parsed, points)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def dump_pwl(f: PwlFunction) -> str:
    return json.dumps(pwl_to_dict(f), indent=1) + "\n"


def load_pwl(text: str) -> PwlFunction:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return pwl_from_dict(d)


# -- networks ------------------------------------------------------------------


def _activation_to_json(sigma: PwlFunction):
    if sigma == relu():
        return "relu"
    if (
        len(sigma.breakpoints) == 1
        and not sigma.point_values
        and [tuple(p) for p in sigma.pieces] == [(0, 0), (0, 1)]
    ):
        return f"stump:{format_rational(sigma.breakpoints[0])}"
    return pwl_to_dict(sigma)


def _activation_from_json(value) -> PwlFunction:
    if value == "relu":
        return relu()
    if isinstance(value, str) and value.startswith("stump"):
        _, _, thr = value.partition(":")
        return stump(_q(thr or "0", "stump threshold"))
    if isinstance(value, dict):
        return pwl_from_dict(value)
    raise FormatError(f"unknown activation {value!r}")


def network_to_dict(spec) -> dict:
    """Serialize a NetworkSpec, or a RecurrentSpec (adds ``iterations``)."""
    net = spec.base if isinstance(spec, RecurrentSpec) else spec
    d = {
        "activation": _activation_to_json(net.activation),
        "output_activation": net.output_activation,
        "layers": [
            [
                {"bias": format_rational(n.bias), "weights": [format_rational(w) for w in n.weights]}
                for n in layer
            ]
            for layer in net.layers
        ],
    }
    if isinstance(spec, RecurrentSpec):
        d["iterations"] = spec.iterations
    return d


def network_from_dict(d):
    """Parse a network object; returns a RecurrentSpec when ``iterations`` is given."""
    if not isinstance(d, dict):
        raise FormatError("network must be a JSON object")
    layers_in = d.get("layers")
    if not isinstance(layers_in, list):
        raise FormatError("network needs a list of layers")
    layers = []
    for li, layer in enumerate(layers_in):
        if not isinstance(layer, list):
            raise FormatError(f"layer {li} must be a list of neurons")
        neurons = []
        for ni, n in enumerate(layer):
            if not isinstance(n, dict) or not isinstance(n.get("weights"), list):
                raise FormatError(f"layer {li} neuron {ni}: need bias and weights")
            neurons.append(
                Neuron(
                    _q(n.get("bias", "0"), f"layer {li} neuron {ni} bias"),
                    tuple(_q(w, f"layer {li} neuron {ni} weight") for w in n["weights"]),
                )
            )
        layers.append(tuple(neurons))
    output_activation = d.get("output_activation", True)
    if not isinstance(output_activation, bool):
        raise FormatError("output_activation must be true or false")
    try:
        net = NetworkSpec(
            layers=tuple(layers),
            activation=_activation_from_json(d.get("activation", "relu")),
            output_activation=output_activation,
        )
        if "iterations" in d:
            it = d["iterations"]
            if not isinstance(it, int) or isinstance(it, bool):
                raise FormatError("iterations must be an integer")
            return RecurrentSpec(net, it)
    except FormatError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    return net


def dump_network(spec) -> str:
    return json.dumps(network_to_dict(spec), indent=1) + "\n"


def load_network(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return network_from_dict(d)


# -- datasets --------------------------------------------------------------------


def dump_dataset(data: LabeledDataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y"])
    for x, y in data:
        w.writerow([format_rational(x), y])
    return buf.getvalue()


def load_dataset(text: str) -> LabeledDataset:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
        raise FormatError("dataset CSV must start with header x,y")
    points = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2 or row[1].strip() not in ("0", "1"):
            raise FormatError(f"line {lineno}: expected x,y with y in {{0,1}}")
        points.append((_q(row[0].strip(), f"line {lineno} x"), int(row[1])))
    try:
        return LabeledDataset(tuple(points))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
