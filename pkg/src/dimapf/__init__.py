"""Multi-agent pathfinding on directed graphs."""

from .graph import DiGraph
from .mapf import Instance, MapfState, Move, Plan, Rotation, apply_plan, apply_step, validate_plan
from .oracle import bfs_reachability, enumerate_group
from .perm import GenWord, Permutation, factorize
from .solver import Decision, decide, plan

__all__ = [
    "DiGraph", "Instance", "MapfState", "Move", "Plan", "Rotation", "apply_plan", "apply_step",
    "validate_plan", "bfs_reachability", "enumerate_group", "GenWord", "Permutation", "factorize",
    "Decision", "decide", "plan",
]
__version__ = "0.1.0"
