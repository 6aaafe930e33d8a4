"""Graph-convolutional motion generator.

Forward pass: H^0 = node features, H^k = relu(S H^{k-1} W^{k-1}) with
S the normalized adjacency, prediction = output head applied to the sum
of final node embeddings, wrapped to [-pi, pi). Training regresses the
next configuration of oracle motions with trajectory-batched squared
error; gradients are exact reverse-mode, computed here (no autograd).
"""

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (ContractError, DivergenceError, FileFormatError,
                     SchemaError, VersionError)
from .graphcon import FEATURE_WIDTH, build_graph, normalized_adjacency
from .kinematics import JointConfig, angle_diff, wrap_angles

MODEL_FORMAT_VERSION = 1


@dataclass
class GcnModel:
    layer_weights: list          # W^0 (F,H), W^1..W^{K-1} (H,H)
    output_weights: np.ndarray   # (H, q)
    bias: np.ndarray             # (q,)
    dims: dict                   # {"F", "H", "K", "q"}

    def copy(self):
        return GcnModel([w.copy() for w in self.layer_weights],
                        self.output_weights.copy(), self.bias.copy(),
                        dict(self.dims))

    def params(self):
        return self.layer_weights + [self.output_weights, self.bias]


def init_model(q, hidden=64, layers=3, seed=0):
    """Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) initialization."""
    if layers < 1:
        raise ContractError("need at least one propagation layer")
    rng = np.random.default_rng(seed)
    sizes = [FEATURE_WIDTH] + [hidden] * layers
    weights = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        stdv = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-stdv, stdv, size=(fan_in, fan_out)))
    stdv = 1.0 / np.sqrt(hidden)
    out_w = rng.uniform(-stdv, stdv, size=(hidden, q))
    bias = np.zeros(q)
    return GcnModel(weights, out_w, bias,
                    {"F": FEATURE_WIDTH, "H": hidden, "K": layers, "q": q})


@dataclass(frozen=True)
class MotionSample:
    """An oracle motion with the scene and goal context it was planned in."""

    motion: object       # kinematics.Motion
    scene: object        # scene.SceneState
    goal: JointConfig = None

    def __post_init__(self):
        if self.goal is None:
            object.__setattr__(self, "goal", self.motion[-1])

    def reversed(self):
        rev = self.motion.reversed()
        return MotionSample(rev, self.scene, rev[-1])


def _prepare(sample):
    """Propagation matrix, per-step feature tensor, and per-step targets."""
    motion = sample.motion
    if len(motion) < 2:
        raise ContractError("training motions need at least 2 configurations")
    base = build_graph(sample.scene, motion[0], sample.goal)
    s_norm = normalized_adjacency(base.adjacency)
    q = motion.dof
    steps = len(motion) - 1
    feats = np.broadcast_to(base.features, (steps, *base.features.shape)).copy()
    arr = motion.as_array()
    feats[:, :q, 0] = arr[:-1]
    targets = arr[1:]
    return s_norm, feats, targets


def _forward_tensor(model, s_norm, feats):
    """Batched forward pass; returns raw predictions and layer caches."""
    h = feats
    pre_acts = []    # S @ H^{k-1} per layer, input side of W^{k-1}
    post_acts = []   # relu outputs Z>0 masks are recoverable from these
    for w in model.layer_weights:
        sh = np.matmul(s_norm, h)
        z = np.matmul(sh, w)
        h = np.maximum(z, 0.0)
        pre_acts.append(sh)
        post_acts.append(h)
    pooled = h.sum(axis=1)
    raw = pooled @ model.output_weights + model.bias
    return raw, pooled, pre_acts, post_acts


def forward(model, graph):
    """Predicted next configuration for a single constructed graph."""
    if graph.features.shape[1] != model.dims["F"]:
        raise ContractError("graph feature width does not match the model")
    feats = graph.features[np.newaxis]
    s_norm = normalized_adjacency(graph.adjacency)
    raw, _, _, _ = _forward_tensor(model, s_norm, feats)
    return JointConfig(wrap_angles(raw[0]))


def _as_prepared(batch):
    return [s if isinstance(s, tuple) else _prepare(s) for s in batch]


def _loss_prepared(model, prepared):
    total = 0.0
    for s_norm, feats, targets in prepared:
        raw, _, _, _ = _forward_tensor(model, s_norm, feats)
        residual = angle_diff(targets, raw)
        total += float(np.sum(residual * residual))
    return total / len(prepared)


def loss(model, batch):
    """Trajectory-batched squared error, averaged over batch motions."""
    if not batch:
        raise ContractError("batch must be non-empty")
    return _loss_prepared(model, _as_prepared(batch))


@dataclass
class Gradients:
    layer_weights: list
    output_weights: np.ndarray
    bias: np.ndarray

    def params(self):
        return self.layer_weights + [self.output_weights, self.bias]


def gradients(model, batch):
    """Exact reverse-mode gradient of loss() w.r.t. every weight and bias."""
    if not batch:
        raise ContractError("batch must be non-empty")
    grads = Gradients([np.zeros_like(w) for w in model.layer_weights],
                      np.zeros_like(model.output_weights),
                      np.zeros_like(model.bias))
    for s_norm, feats, targets in _as_prepared(batch):
        raw, pooled, pre_acts, post_acts = \
            _forward_tensor(model, s_norm, feats)
        residual = angle_diff(targets, raw)
        d_raw = -2.0 * residual
        grads.output_weights += pooled.T @ d_raw
        grads.bias += d_raw.sum(axis=0)
        d_pooled = d_raw @ model.output_weights.T
        d_h = np.broadcast_to(d_pooled[:, np.newaxis, :],
                              post_acts[-1].shape).copy()
        for k in range(len(model.layer_weights) - 1, -1, -1):
            d_z = d_h * (post_acts[k] > 0.0)
            grads.layer_weights[k] += np.einsum(
                "tmi,tmj->ij", pre_acts[k], d_z)
            if k > 0:
                d_h = np.matmul(s_norm.T,
                                np.matmul(d_z, model.layer_weights[k].T))
    n = len(batch)
    for g in grads.params():
        g /= n
    return grads


@dataclass
class TrainConfig:
    lr: float = 1e-3
    batch_motions: int = 16
    max_epochs: int = 200
    patience: int = 20
    seed: int = 0
    val_fraction: float = 0.1
    augment_reversed: bool = True
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8


@dataclass
class TrainResult:
    model: GcnModel
    curve: list = field(default_factory=list)  # (epoch, train_loss, val_loss)


def train(model, dataset, hyper=None):
    """Adam training with a validation split, early stopping, best-weight keep.

    dataset is either a list of MotionSample or an object exposing
    samples("train").
    """
    hyper = hyper or TrainConfig()
    samples = dataset.samples("train") if hasattr(dataset, "samples") \
        else list(dataset)
    if not samples:
        raise ContractError("training set is empty")
    rng = np.random.default_rng(hyper.seed)
    perm = rng.permutation(len(samples))
    n_val = int(round(hyper.val_fraction * len(samples)))
    n_val = min(max(n_val, 1 if len(samples) > 1 else 0), len(samples) - 1)
    val = [samples[i] for i in perm[:n_val]]
    tr = [samples[i] for i in perm[n_val:]]
    if hyper.augment_reversed:
        tr = tr + [s.reversed() for s in tr]
    # graphs and targets do not depend on the weights; tensorize once
    tr = [_prepare(s) for s in tr]
    val = [_prepare(s) for s in val]

    work = model.copy()
    m_state = [np.zeros_like(p) for p in work.params()]
    v_state = [np.zeros_like(p) for p in work.params()]
    step = 0
    best = work.copy()
    best_val = np.inf
    since_best = 0
    curve = []
    for epoch in range(hyper.max_epochs):
        order = rng.permutation(len(tr))
        epoch_losses = []
        for lo in range(0, len(tr), hyper.batch_motions):
            batch = [tr[i] for i in order[lo:lo + hyper.batch_motions]]
            epoch_losses.append(loss(work, batch))
            g = gradients(work, batch)
            step += 1
            for p, gp, ms, vs in zip(work.params(), g.params(),
                                     m_state, v_state):
                ms *= hyper.adam_beta1
                ms += (1 - hyper.adam_beta1) * gp
                vs *= hyper.adam_beta2
                vs += (1 - hyper.adam_beta2) * gp * gp
                m_hat = ms / (1 - hyper.adam_beta1 ** step)
                v_hat = vs / (1 - hyper.adam_beta2 ** step)
                p -= hyper.lr * m_hat / (np.sqrt(v_hat) + hyper.adam_eps)
        train_loss = float(np.mean(epoch_losses))
        val_loss = loss(work, val) if val else train_loss
        if not (np.isfinite(train_loss) and np.isfinite(val_loss)):
            raise DivergenceError(
                f"non-finite loss at epoch {epoch}: "
                f"train={train_loss}, val={val_loss}")
        curve.append((epoch, train_loss, val_loss))
        if val_loss < best_val:
            best_val = val_loss
            best = work.copy()
            since_best = 0
        else:
            since_best += 1
            if since_best >= hyper.patience:
                break
    if hyper.max_epochs == 0:
        best = work.copy()
    return TrainResult(best, curve)


def save_model(model, path):
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "dims": model.dims,
        "layer_weights": [w.tolist() for w in model.layer_weights],
        "output_weights": model.output_weights.tolist(),
        "bias": model.bias.tolist(),
    }
    with open(path, "w") as f:
        json.dump(doc, f)
        f.write("\n")


def load_model(path):
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}: not valid JSON: {exc}") from exc
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise VersionError(
            f"{path}: unsupported format_version "
            f"{doc.get('format_version')!r}")
    try:
        dims = {k: int(doc["dims"][k]) for k in ("F", "H", "K", "q")}
        weights = [np.array(w, dtype=float) for w in doc["layer_weights"]]
        out_w = np.array(doc["output_weights"], dtype=float)
        bias = np.array(doc["bias"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed model document: {exc}") from exc
    shapes = [(dims["F"], dims["H"])] + \
        [(dims["H"], dims["H"])] * (dims["K"] - 1)
    if len(weights) != dims["K"] or \
            any(w.shape != s for w, s in zip(weights, shapes)) or \
            out_w.shape != (dims["H"], dims["q"]) or \
            bias.shape != (dims["q"],):
        raise SchemaError(f"{path}: weight shapes disagree with dims record")
    return GcnModel(weights, out_w, bias, dims)
