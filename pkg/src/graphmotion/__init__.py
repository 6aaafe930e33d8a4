"""Graph-network manipulator motion planning toolkit.

A learned planner imitating a sampling-based oracle: the workspace is
encoded as a graph (robot joints, goal, obstacle corners, human arm), a
graph-convolutional network predicts the next configuration, and a
bi-directional loop with virtual interpolations assembles full motions.
Includes RRT/RRT* baselines, a dynamic-obstacle replanning executor, and
a benchmark CLI.
"""

from .backend import backend_name
from .kinematics import (JointConfig, Motion, RobotModel, ee_path_length,
                         forward_kinematics, interpolate, within_limits)
from .geometry import (Box, Capsule, capsule_box_collides,
                       capsule_capsule_collides, config_collides,
                       motion_collides)
from .scene import (ArmTrace, HumanArmState, ScenarioSpec, SceneState,
                    StaticObstacle, load_scene, save_scene,
                    sample_free_config, arm_state_at, synth_arm_trace)
from .graphcon import PlanGraph, build_graph, normalized_adjacency
from .gnn import (GcnModel, MotionSample, TrainConfig, forward, gradients,
                  init_model, load_model, loss, save_model, train)
from .oracle import (Dataset, OracleResult, PlannerParams, StopRule,
                     generate_dataset, load_dataset, plan_rrt,
                     plan_rrt_star, resample_motion, save_dataset)
from .planner import (ExecOptions, ExecutionLog, PlanOptions, PlanOutcome,
                      execute_with_replanning, plan_bidirectional,
                      plan_single_direction, stitch)

__version__ = "0.1.0"
