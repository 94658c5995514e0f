"""Subtree mutation and subtree crossover."""

from __future__ import annotations

import random

from gmpforge.gmp.individual import GenerationParams, GmpIndividual, TreeGrower
from gmpforge.gmp.nodes import ADF_CALL_OP, Node

CROSSOVER_ATTEMPTS = 10


def _depth_limit(role: int, params: GenerationParams) -> int:
    return params.max_function_depth if role == 0 else params.max_main_depth


def _replace_tree(ind: GmpIndividual, role: int, tree: Node) -> GmpIndividual:
    trees = list(ind.trees)
    trees[role] = tree
    return ind.with_trees(trees[0], trees[1:])


def mutate(
    ind: GmpIndividual,
    mutation_depth: int = 5,
    params: GenerationParams = GenerationParams(),
    rng: random.Random | None = None,
) -> GmpIndividual:
    """Replace one subtree, rooted no deeper than ``mutation_depth``, with a fresh one."""
    rng = rng or random.Random()
    role = rng.randrange(len(ind.trees))
    tree = ind.trees[role]
    limit = _depth_limit(role, params)
    points = [(path, depth, node) for path, depth, node in tree.positions() if depth <= mutation_depth]
    path, depth, node = rng.choice(points)
    grower = TreeGrower(ind.signature, params, rng)
    adf_kind = ind.adf.kind if role else None
    fresh = grower.grow(node.kind, limit - depth + 1, adf_kind)
    return _replace_tree(ind, role, tree.replace(path, fresh))


def _subtree_fits(subtree: Node, recipient: GmpIndividual, role: int) -> bool:
    if role == 0:
        return True
    return not any(n.op == ADF_CALL_OP and n.kind is not recipient.adf.kind for n in subtree)


def crossover(
    a: GmpIndividual,
    b: GmpIndividual,
    rng: random.Random | None = None,
    params: GenerationParams = GenerationParams(),
) -> tuple[GmpIndividual, GmpIndividual]:
    """Swap a pair of same-kind subtrees taken from the same tree role of each parent.

    Falls back to clones of the parents when no depth-respecting, type-valid
    pair is found within ``CROSSOVER_ATTEMPTS`` draws.
    """
    rng = rng or random.Random()
    if a.signature != b.signature:
        raise ValueError("crossover parents must share a signature")
    for _ in range(CROSSOVER_ATTEMPTS):
        role = rng.randrange(len(a.trees))
        limit = _depth_limit(role, params)
        ta, tb = a.trees[role], b.trees[role]
        path_a, depth_a, sub_a = rng.choice(list(ta.positions()))
        height_a = sub_a.height
        candidates = [
            (path_b, depth_b, sub_b)
            for path_b, depth_b, sub_b in tb.positions()
            if sub_b.kind is sub_a.kind
            and depth_a - 1 + sub_b.height <= limit
            and depth_b - 1 + height_a <= limit
        ]
        candidates = [
            c for c in candidates if _subtree_fits(c[2], a, role) and _subtree_fits(sub_a, b, role)
        ]
        if not candidates:
            continue
        path_b, _, sub_b = rng.choice(candidates)
        child_a = _replace_tree(a, role, ta.replace(path_a, sub_b))
        child_b = _replace_tree(b, role, tb.replace(path_b, sub_a))
        return child_a, child_b
    return a.clone(), b.clone()
