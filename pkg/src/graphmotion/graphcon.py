"""Graph constructor: workspace + current/goal configs -> feature/adjacency.

Node ordering is fixed: current joints 1..q, goal joints 1..q, all box
corners sorted lexicographically by coordinate (so the encoding does not
depend on obstacle declaration order), then arm shoulder/elbow/wrist.
Features are zero-padded to width 3: joint nodes carry [angle, 0, 0],
obstacle/arm nodes carry [x, y, z].

Adjacency convention: adjacency[i, j] = 1 means node j's embedding flows
into node i under the propagation rule (row = receiver). Goal, obstacle,
and arm rows contain no off-diagonal entries, so their embeddings are
never updated from other nodes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .kinematics import within_limits

FEATURE_WIDTH = 3


@dataclass(frozen=True)
class PlanGraph:
    features: np.ndarray   # (M, 3)
    adjacency: np.ndarray  # (M, M) binary
    node_roles: tuple      # per-node tags like "current_joint:0"

    def __post_init__(self):
        m = self.features.shape[0]
        if self.features.shape != (m, FEATURE_WIDTH):
            raise ContractError("features must be (M, 3)")
        if self.adjacency.shape != (m, m):
            raise ContractError("adjacency must be (M, M)")
        object.__setattr__(self, "node_roles", tuple(self.node_roles))

    @property
    def num_nodes(self):
        return self.features.shape[0]


def build_graph(scene, current, goal):
    """Deterministic graph encoding of (scene, current config, goal config)."""
    q = scene.robot.dof
    if current.dof != q or goal.dof != q:
        raise ContractError("config/scene dimension mismatch")
    if not within_limits(scene.robot, goal):
        raise ContractError("goal configuration is out of limits")

    roles = [f"current_joint:{i}" for i in range(q)]
    roles += [f"goal_joint:{i}" for i in range(q)]
    features = [[a, 0.0, 0.0] for a in current.angles]
    features += [[a, 0.0, 0.0] for a in goal.angles]
    corners = [corner for obs in scene.obstacles
               for corner in obs.box.corners()]
    if corners:
        # canonical lexicographic order: the encoding is invariant to the
        # declaration order of the obstacles, bit-for-bit
        arr = np.array(corners)
        order = np.lexsort((arr[:, 2], arr[:, 1], arr[:, 0]))
        for i in order:
            roles.append("obstacle_corner")
            features.append(list(arr[i]))
    if scene.arm is not None:
        for point in (scene.arm.shoulder, scene.arm.elbow, scene.arm.wrist):
            roles.append("arm_joint")
            features.append(list(point))

    m = len(roles)
    adjacency = np.zeros((m, m), dtype=np.int8)
    # bidirectional chain along the current joints (links as edges)
    for i in range(q - 1):
        adjacency[i, i + 1] = 1
        adjacency[i + 1, i] = 1
    # every goal / obstacle / arm node feeds every current joint node
    for j in range(q, m):
        adjacency[:q, j] = 1
    return PlanGraph(np.array(features), adjacency, tuple(roles))


def normalized_adjacency(adjacency):
    """Symmetrically normalized adjacency with self-loops.

    A_tilde = A + I; D_tilde is the diagonal of A_tilde's row sums; the
    result is D^{-1/2} A_tilde D^{-1/2}, applied verbatim even when A is
    asymmetric.
    """
    a = np.asarray(adjacency, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError("adjacency must be square")
    a_tilde = a + np.eye(a.shape[0])
    deg = a_tilde.sum(axis=1)
    # 1/sqrt(d_i d_j) in one rooting so unit/equal degrees stay exact
    return a_tilde / np.sqrt(np.outer(deg, deg))
