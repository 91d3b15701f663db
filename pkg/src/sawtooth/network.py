"""One-dimensional feedforward and recurrent networks with sawtooth activations.

Networks compile exactly to :class:`~sawtooth.pwl.PwlFunction`.  The mirror
map (a tent on ``[0, 1]``) and its iterates live here as well, both as a
two-layer ReLU network and in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .pwl import (
    ONE,
    ZERO,
    HALF,
    ExactRational,
    PwlFunction,
    affine,
    constant,
    identity,
    piece_count,
    pwl_add,
    pwl_compose,
    pwl_scale_shift,
    rational,
)


# -- activation library -------------------------------------------------------


def relu() -> PwlFunction:
    """``max(0, z)``, a 2-sawtooth."""
    return PwlFunction([0], [(0, 0), (1, 0)])


def stump(threshold=0) -> PwlFunction:
    """Decision stump ``1[z >= threshold]``; discontinuous, 2 pieces."""
    return PwlFunction([rational(threshold)], [(0, 0), (0, 1)])


# -- network descriptions -----------------------------------------------------


@dataclass(frozen=True)
class Neuron:
    bias: ExactRational
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "bias", rational(self.bias))
        object.__setattr__(self, "weights", tuple(rational(w) for w in self.weights))


@dataclass(frozen=True)
class NetworkSpec:
    """Layered network on scalar input.

    ``layers[0]`` reads the input directly (one weight per neuron); every later
    neuron has one weight per neuron of the previous layer.  The last layer is
    a single output neuron.  ``output_activation=False`` leaves that neuron
    linear.
    """

    layers: tuple
    activation: PwlFunction = field(default_factory=relu)
    output_activation: bool = True

    def __post_init__(self):
        layers = tuple(
            tuple(n if isinstance(n, Neuron) else Neuron(*n) for n in layer)
            for layer in self.layers
        )
        object.__setattr__(self, "layers", layers)
        if not layers:
            raise ValueError("network needs at least one layer")
        width_in = 1
        for depth, layer in enumerate(layers):
            if not layer:
                raise ValueError(f"layer {depth} is empty")
            for n in layer:
                if len(n.weights) != width_in:
                    raise ValueError(
                        f"layer {depth}: neuron has {len(n.weights)} weights, expected {width_in}"
                    )
            width_in = len(layer)
        if len(layers[-1]) != 1:
            raise ValueError(f"final layer must have exactly 1 neuron, has {len(layers[-1])}")

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def width(self) -> int:
        return max(len(layer) for layer in self.layers)

    @property
    def activation_pieces(self) -> int:
        return piece_count(self.activation)

    def piece_bound(self) -> int:
        """``(t*m)**l`` for this network's t, m and l."""
        return (self.activation_pieces * self.width) ** self.depth


@dataclass(frozen=True)
class RecurrentSpec:
    base: NetworkSpec
    iterations: int

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError("iterations must be a positive integer")

    def piece_bound(self) -> int:
        b = self.base
        return (b.activation_pieces * b.width) ** (b.depth * self.iterations)


@dataclass(frozen=True)
class MirrorDecomposition:
    index: int
    fraction: ExactRational


# -- evaluation and compilation ---------------------------------------------


def evaluate_network(net: NetworkSpec, x) -> ExactRational:
    """Forward pass at a single point, without compiling."""
    sigma = net.activation
    values = [rational(x)]
    last = len(net.layers) - 1
    for depth, layer in enumerate(net.layers):
        out = []
        for n in layer:
            z = n.bias
            for w, v in zip(n.weights, values):
                z = z + w * v
            out.append(sigma(z) if depth < last or net.output_activation else z)
        values = out
    return values[0]


def evaluate_recurrent(rnet: RecurrentSpec, x) -> ExactRational:
    x = rational(x)
    for _ in range(rnet.iterations):
        x = evaluate_network(rnet.base, x)
    return x


def compile_network(net: NetworkSpec) -> PwlFunction:
    """Exact piecewise-affine form of ``net``, built layer by layer."""
    sigma = net.activation
    outputs = [identity()]
    last = len(net.layers) - 1
    for depth, layer in enumerate(net.layers):
        nodes = []
        for n in layer:
            if depth == 0:
                pre = affine(n.weights[0], n.bias)
            else:
                pre = constant(n.bias)
                for w, g in zip(n.weights, outputs):
                    if w != 0:
                        pre = pwl_add(pre, pwl_scale_shift(g, w, ZERO))
            if depth < last or net.output_activation:
                nodes.append(pwl_compose(sigma, pre))
            else:
                nodes.append(pre)
        outputs = nodes
    return outputs[0]


def compile_recurrent(rnet: RecurrentSpec) -> PwlFunction:
    """``g`` composed with itself ``iterations`` times, left-associated."""
    g = compile_network(rnet.base)
    f = g
    for _ in range(rnet.iterations - 1):
        f = pwl_compose(f, g)
    return f


# -- mirror map ----------------------------------------------------------------


def mirror_map() -> PwlFunction:
    """Tent map: ``2x`` on ``[0, 1/2)``, ``2 - 2x`` on ``[1/2, 1)``, zero elsewhere."""
    return PwlFunction([0, HALF, 1], [(0, 0), (2, 0), (-2, 2), (0, 0)])


def mirror_network() -> NetworkSpec:
    """``relu(2 relu(x) - 4 relu(x - 1/2))`` as a width-2, depth-2 network."""
    return NetworkSpec(
        layers=(
            (Neuron(0, (1,)), Neuron(-HALF, (1,))),
            (Neuron(0, (2, -4)),),
        ),
        activation=relu(),
    )


def _check_unit(x):
    x = rational(x)
    if not ZERO <= x <= ONE:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return x


def mirror_decompose(x, k: int) -> MirrorDecomposition:
    """Split ``x`` in ``[0, 1]`` as ``(index + fraction) * 2**(1-k)``."""
    x = _check_unit(x)
    if k < 1:
        raise ValueError("k must be positive")
    scaled = x * 2 ** (k - 1)
    index = int(scaled.numerator // scaled.denominator)
    return MirrorDecomposition(index, scaled - index)


def mirror_closed_form(x, k: int) -> ExactRational:
    """k-th iterate of the mirror map on ``[0, 1]`` without composing."""
    frac = mirror_decompose(x, k).fraction
    if frac <= HALF:
        return 2 * frac
    return 2 * (1 - frac)


def mirror_closed_form_pwl(k: int) -> PwlFunction:
    """Triangle wave with ``2**(k-1)`` teeth on ``[0, 1]``, built directly."""
    if k < 1:
        raise ValueError("k must be positive")
    n = 2**k
    step = rational(1) / n
    up = rational(n)
    down = -up
    bps = [ZERO]
    slopes = [ZERO]
    icepts = [ZERO]
    for j in range(n):
        bps.append(step * (j + 1))
        if j % 2 == 0:
            slopes.append(up)
            icepts.append(rational(-j))
        else:
            slopes.append(down)
            icepts.append(rational(j + 1))
    slopes.append(ZERO)
    icepts.append(ZERO)
    return PwlFunction._raw(bps, slopes, icepts, canonical=True, continuous=True)
