"""
The trajectory operator: lift once, run attention blocks over the phase
stream, project every (timestep, atom) row back to a 3-vector.

Inputs are duplicated frame blocks of shape ``(B, P, N, 3)``; row
``p * N + i`` of every stream is atom ``i`` at query lag ``p``.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike

from ..autodiff import Tensor, no_grad, parameter, rms_norm, swiglu
from ..autodiff.tensor import Array
from ..core.errors import CanonicalizationDegenerate, CheckpointError, ContractError, ShapeError
from ..geometry.canonical import CanonicalFrame, canonicalize
from ..geometry.lifting import Lift, LiftedEmbedding, duplicate_state
from ..geometry.state import MoleculeState
from ..graph.radius import radius_graph
from ..graph.rwpe import RwpeMatrix, attach_rwpe, rwpe
from .attention import heterogeneous_attention
from .config import AtomModelConfig
from .trope import TropeAngles, trope_angles

logger = logging.getLogger(__name__)


def _dense(rng: np.random.Generator, fan_in: int, fan_out: int) -> Array:
    return rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out))


class AtomModel:
    """
    Parameters and forward map of the operator.

    Build with :meth:`initialize`; the parameter set is a pure function of
    the configuration and the generator state.

    Examples:
        >>> cfg = AtomModelConfig(d_v=16, n_layers=1, n_heads=2, d_h=8)
        >>> model = AtomModel.initialize(cfg, np.random.default_rng(0))
        >>> s = MoleculeState.from_arrays(np.eye(3), np.zeros((3, 3)), [6, 1, 8])
        >>> out = atom_forward(s, [0.5, 1.0], model)
        >>> out.shape, bool(np.allclose(out.data[1], s.positions))
        ((2, 3, 3), True)
    """

    def __init__(
        self,
        config: AtomModelConfig,
        lift: Lift,
        layers: list[dict[str, Tensor]],
        head: dict[str, Tensor],
    ) -> None:
        """Assemble a model from existing parameter tensors."""
        self.config = config
        self.lift = lift
        self.layers = layers
        self.head = head

    @classmethod
    def initialize(cls, config: AtomModelConfig, rng: np.random.Generator) -> AtomModel:
        """
        Draw fresh parameters.

        Gates start at 1/3 per stream, value-residual logits at 0, norm gains
        at 1, and the output projection at zero so that delta prediction
        starts as the identity map.
        """
        d, hidden = config.d_v, config.mlp_hidden
        lift = Lift.create(config.lifting, config.layout(), rng)
        streams = ("x", "v", "z") if config.heterogeneous else ("z",)
        layers: list[dict[str, Tensor]] = []
        for index in range(config.n_layers):
            layer = {
                "norm_z": parameter(np.ones(d)),
                "wq": parameter(_dense(rng, d, d)),
            }
            for name in streams:
                if name != "z":
                    layer[f"norm_{name}"] = parameter(np.ones(d))
                layer[f"wk_{name}"] = parameter(_dense(rng, d, d))
                layer[f"wv_{name}"] = parameter(_dense(rng, d, d))
                layer[f"gamma_{name}"] = parameter(np.array(1.0 / len(streams)))
            if index > 0:
                layer["alpha"] = parameter(np.array(0.0))
            layer["wo"] = parameter(_dense(rng, d, d))
            layer["norm_mlp"] = parameter(np.ones(d))
            layer["w_up"] = parameter(_dense(rng, d, 2 * hidden))
            layer["w_down"] = parameter(_dense(rng, hidden, d))
            layers.append(layer)
        head = {
            "norm_out": parameter(np.ones(d)),
            "w_out": parameter(np.zeros((d, 3))),
            "b_out": parameter(np.zeros(3)),
        }
        model = cls(config, lift, layers, head)
        for name, tensor in model.parameters().items():
            tensor.name = name
        return model

    # ------------------------------------------------------------------
    # Parameter access
    # ------------------------------------------------------------------
    def parameters(self) -> dict[str, Tensor]:
        """Every trainable tensor under a stable dotted name."""
        params = {f"lift.{k}": v for k, v in self.lift.parameters().items()}
        for index, layer in enumerate(self.layers):
            params.update({f"layers.{index}.{k}": v for k, v in layer.items()})
        params.update({f"head.{k}": v for k, v in self.head.items()})
        return params

    def num_parameters(self) -> int:
        """Total number of scalar parameters."""
        return sum(t.size for t in self.parameters().values())

    def state_dict(self) -> dict[str, Array]:
        """Copies of all parameter values."""
        return {name: t.data.copy() for name, t in self.parameters().items()}

    def load_state_dict(self, state: Mapping[str, Array]) -> None:
        """
        Overwrite parameter values in place.

        Raises:
            CheckpointError: Listing missing, unexpected and mis-shaped entries
        """
        params = self.parameters()
        missing = sorted(set(params) - set(state))
        unexpected = sorted(set(state) - set(params))
        mismatched = [
            f"{name}: checkpoint {np.shape(state[name])} vs model {params[name].shape}"
            for name in sorted(set(params) & set(state))
            if np.shape(state[name]) != params[name].shape
        ]
        if missing or unexpected or mismatched:
            lines = [f"missing {name}" for name in missing]
            lines += [f"unexpected {name}" for name in unexpected]
            lines += mismatched
            raise CheckpointError("checkpoint does not fit the model:\n  " + "\n  ".join(lines))
        for name, tensor in params.items():
            tensor.data[...] = state[name]

    def zero_grad(self) -> None:
        """Clear gradients of every parameter."""
        for tensor in self.parameters().values():
            tensor.zero_grad()

    # ------------------------------------------------------------------
    # Forward
    # ------------------------------------------------------------------
    def angles(self, lags: ArrayLike) -> TropeAngles:
        """Temporal rotations for query lags measured from the input frame."""
        t = np.asarray(lags, dtype=np.float64).reshape(-1)
        if not self.config.use_trope:
            return TropeAngles.zeros(t.size, self.config.d_h)
        return trope_angles(
            t, self.config.d_h, self.config.rope_base, self.config.rope_timescale, t0=0.0
        )

    def lift_block(self, positions: Array, velocities: Array, atomic_numbers: ArrayLike) -> LiftedEmbedding:
        """Lift a duplicated block and attach random-walk encodings when enabled."""
        embedding = self.lift(positions, velocities, atomic_numbers)
        if self.config.rwpe_enabled:
            encodings = [
                rwpe(radius_graph(frame, self.config.rwpe_epsilon), self.config.rwpe_k)
                for frame in positions[:, 0]
            ]
            embedding = attach_rwpe(embedding, RwpeMatrix.stack(encodings))
        return embedding

    def forward(
        self,
        positions: ArrayLike,
        velocities: ArrayLike,
        atomic_numbers: ArrayLike,
        lags: ArrayLike,
        *,
        training: bool = False,
        rng: np.random.Generator | None = None,
        weights_sink: list[Array] | None = None,
    ) -> Tensor:
        """
        Predict positions for a batch of duplicated input frames.

        Args:
            positions: ``(B, P, N, 3)`` input positions (identical along P)
            velocities: ``(B, P, N, 3)`` input velocities
            atomic_numbers: ``(N,)`` shared by the batch
            lags: ``(P,)`` query times relative to the input frame
            training: Enables attention dropout
            rng: Generator for dropout masks
            weights_sink: Receives every attention weight array

        Returns:
            ``(B, P, N, 3)`` predicted positions

        Raises:
            ShapeError: If the block and the lags disagree
        """
        x = np.asarray(positions, dtype=np.float64)
        v = np.asarray(velocities, dtype=np.float64)
        t = np.asarray(lags, dtype=np.float64).reshape(-1)
        if x.ndim != 4 or x.shape[1] != t.size:
            raise ShapeError(f"block {x.shape} does not match {t.size} query lags")
        if self.config.mode == "canonicalized":
            return self._forward_canonical(x, v, atomic_numbers, t, training, rng, weights_sink)
        return self._forward_block(x, v, atomic_numbers, t, training, rng, weights_sink)

    __call__ = forward

    def _forward_block(
        self,
        x: Array,
        v: Array,
        atomic_numbers: ArrayLike,
        lags: Array,
        training: bool,
        rng: np.random.Generator | None,
        weights_sink: list[Array] | None,
    ) -> Tensor:
        cfg = self.config
        batch, steps, atoms, _ = x.shape
        embedding = self.lift_block(x, v, atomic_numbers)
        angles = self.angles(lags)
        z = embedding.z
        first_values: dict[str, Tensor] | None = None
        for index, layer in enumerate(self.layers):
            streams = {"z": rms_norm(z, layer["norm_z"], cfg.rms_eps)}
            if cfg.heterogeneous:
                streams["x"] = rms_norm(embedding.x, layer["norm_x"], cfg.rms_eps)
                streams["v"] = rms_norm(embedding.v, layer["norm_v"], cfg.rms_eps)
            result = heterogeneous_attention(
                streams,
                layer,
                angles,
                n_heads=cfg.n_heads,
                training=training,
                dropout_p=cfg.attention_dropout,
                rng=rng,
                first_values=first_values,
                residual_alpha=layer.get("alpha"),
                weights_sink=weights_sink,
            )
            if index == 0:
                first_values = result.values
            z = z + result.output @ layer["wo"]
            hidden = rms_norm(z, layer["norm_mlp"], cfg.rms_eps) @ layer["w_up"]
            z = z + swiglu(hidden) @ layer["w_down"]

        out = rms_norm(z, self.head["norm_out"], cfg.rms_eps) @ self.head["w_out"] + self.head["b_out"]
        out = out.reshape(batch, steps, atoms, 3)
        if cfg.delta_prediction:
            out = out + Tensor(x)
        return out

    def _forward_canonical(
        self,
        x: Array,
        v: Array,
        atomic_numbers: ArrayLike,
        lags: Array,
        training: bool,
        rng: np.random.Generator | None,
        weights_sink: list[Array] | None,
    ) -> Tensor:
        frames = [
            canonical_frame_or_identity(MoleculeState(x[b, 0], v[b, 0], atomic_numbers))
            for b in range(x.shape[0])
        ]
        rotations = np.stack([f.rotation for f in frames])[:, None]
        centroids = np.stack([f.centroid for f in frames])[:, None, None]
        x_canonical = (x - centroids) @ rotations
        v_canonical = v @ rotations
        out = self._forward_block(
            x_canonical, v_canonical, atomic_numbers, lags, training, rng, weights_sink
        )
        return out @ Tensor(np.swapaxes(rotations, -1, -2)) + Tensor(centroids)

    def predict(
        self,
        positions: ArrayLike,
        velocities: ArrayLike,
        atomic_numbers: ArrayLike,
        lags: ArrayLike,
    ) -> Array:
        """Evaluation-mode forward without graph recording."""
        with no_grad():
            return self.forward(positions, velocities, atomic_numbers, lags).data


def canonical_frame_or_identity(state: MoleculeState) -> CanonicalFrame:
    """Canonical frame of ``state``, or the identity frame when it is degenerate."""
    try:
        return canonicalize(state)
    except CanonicalizationDegenerate as exc:
        logger.warning("canonicalization fell back to the identity frame: %s", exc)
        return CanonicalFrame.identity(state)


def atom_forward(
    state: MoleculeState,
    timestamps: Sequence[float] | Array,
    model: AtomModel,
    training: bool = False,
    *,
    rng: np.random.Generator | None = None,
    weights_sink: list[Array] | None = None,
) -> Tensor:
    """
    Predict the trajectory of one state at absolute query times.

    Args:
        state: Input snapshot at ``state.time``
        timestamps: P strictly increasing times, all >= ``state.time``
        model: The operator
        training: Enables dropout
        rng: Generator for dropout masks
        weights_sink: Receives every attention weight array

    Returns:
        ``(P, N, 3)`` predicted positions

    Raises:
        ContractError: If the timestamps are not strictly increasing or precede the state
    """
    t = np.asarray(timestamps, dtype=np.float64).reshape(-1)
    if t.size < 1:
        raise ContractError("need at least one query timestamp")
    if np.any(np.diff(t) <= 0.0):
        raise ContractError(f"timestamps must be strictly increasing, got {t.tolist()}")
    if t[0] < state.time:
        raise ContractError(f"timestamps must not precede the input time {state.time}")
    positions, velocities = duplicate_state(state, t.size)
    out = model.forward(
        positions,
        velocities,
        state.atomic_numbers,
        t - state.time,
        training=training,
        rng=rng,
        weights_sink=weights_sink,
    )
    return out[0]
