"""Route pricing: find routes whose reduced cost is positive.

The search is a bounded bidirectional labelling: forward labels grow route
prefixes from the source, backward labels grow suffixes from the
destination, both only up to half the length budget, and complete routes
arise by joining a prefix and a suffix across one edge.  Elementarity is
relaxed and restored lazily (decremental state-space relaxation): only the
targets in a growing *critical set* are forbidden from repeat visits, and
whenever the best join is still non-elementary its repeated targets join
the critical set and the sweep reruns.  Immediate back-and-forth moves
(target cycles t -> u -> t) are excluded outright, which requires the
guarded label-discard rules in :func:`_covered`.
"""

import math
from collections import deque
from dataclasses import dataclass

from .instance import ReducedGraphView
from .lp import TOL
from .master import DualValues, Route

#: Slack added to the length budget comparisons.
LENGTH_EPS = 1e-9
#: Weak-inequality slop in dominance comparisons.
WEAK_EPS = 1e-12
#: A dominance relation must be strict in at least one component at this scale.
STRICT_EPS = 1e-9

FORWARD = 0
BACKWARD = 1


class Label:
    """One partial path in one sweep direction.

    ``mask_crit`` records visited *critical* targets (bitmask), ``mask_all``
    every visited genuine target, ``elem`` whether the partial path is
    elementary over all targets, and ``pred_target`` the target of the
    vertex this label was extended from (-1 for the seeds).
    """

    __slots__ = ("mask_crit", "mask_all", "elem", "length", "rc", "vertex",
                 "pred", "pred_target", "dead")

    def __init__(self, mask_crit, mask_all, elem, length, rc, vertex, pred, pred_target):
        self.mask_crit = mask_crit
        self.mask_all = mask_all
        self.elem = elem
        self.length = length
        self.rc = rc
        self.vertex = vertex
        self.pred = pred
        self.pred_target = pred_target
        self.dead = False


@dataclass
class PricingResult:
    """Outcome of one pricing call.

    An empty ``routes`` with ``best_reduced_cost <= TOL`` certifies that no
    route outside the exclusion set can improve the master LP.
    """

    routes: list
    best_reduced_cost: float
    best_elementary: bool
    iterations: int
    interrupted: bool
    labels_created: int


def _dominates(a: Label, b: Label) -> bool:
    """a weakly better on reduced cost, length, and critical visits, and
    strictly better in at least one of them."""
    if a.rc < b.rc - WEAK_EPS:
        return False
    if a.length > b.length + WEAK_EPS:
        return False
    if a.mask_crit & ~b.mask_crit:
        return False
    return (
        a.rc > b.rc + STRICT_EPS
        or a.length < b.length - STRICT_EPS
        or a.mask_crit != b.mask_crit
    )


def _can_reach_own_pred(label: Label, adjacency, half_budget: float) -> bool:
    """Could ``label`` extend to its own predecessor target if the
    back-and-forth exclusion did not exist?"""
    pt = label.pred_target
    if pt < 0:
        return False  # seed labels have no predecessor to return to
    if label.mask_crit >> pt & 1:
        return False  # its critical set already blocks the return
    for vertex, cost, target in adjacency[label.vertex]:
        if target == pt and label.length + cost <= half_budget + LENGTH_EPS:
            return True
    return False


def _covered(candidate: Label, dominators, adjacency, half_budget: float) -> bool:
    """May ``candidate`` be discarded given labels that dominate it?

    Plain dominance is unsafe under two-cycle elimination: a dominator
    cannot extend back to its own predecessor target, so it can only stand
    in for the candidate when (a) both share that predecessor target, or
    (b) the dominator could not make that return move anyway, or (c) a
    second dominator with a different predecessor target covers the move.
    """
    preds = set()
    for dom in dominators:
        if dom.pred_target == candidate.pred_target:
            return True
        if not _can_reach_own_pred(dom, adjacency, half_budget):
            return True
        preds.add(dom.pred_target)
        if len(preds) >= 2:
            return True
    return False


def _insert(bucket, new: Label, adjacency, half_budget, use_dominance) -> bool:
    if not use_dominance:
        bucket.append(new)
        return True
    dominators = [lab for lab in bucket if not lab.dead and _dominates(lab, new)]
    if dominators and _covered(new, dominators, adjacency, half_budget):
        return False
    for lab in bucket:
        if lab.dead or not _dominates(new, lab):
            continue
        doms = [new] + [o for o in bucket
                        if not o.dead and o is not lab and _dominates(o, lab)]
        if _covered(lab, doms, adjacency, half_budget):
            lab.dead = True
    bucket[:] = [lab for lab in bucket if not lab.dead]
    bucket.append(new)
    return True


def _sweep(seeds, adjacency, gains, nu_lookup, half_budget, crit_mask, use_dominance, target_of):
    """One direction of the labelling; returns vertex -> live labels."""
    buckets = {v: [seed] for v, seed in seeds.items()}
    queue = deque(seeds.values())
    created = 0
    while queue:
        label = queue.popleft()
        if label.dead:
            continue
        from_target = target_of(label.vertex)
        for vertex, cost, target in adjacency[label.vertex]:
            if target == label.pred_target:
                continue  # two-cycle exclusion
            bit = 1 << target
            if label.mask_crit & bit:
                continue  # elementarity on the critical set
            length = label.length + cost
            if length > half_budget + LENGTH_EPS:
                continue
            rc = label.rc + gains[target]
            if nu_lookup is not None:
                rc += nu_lookup(from_target, target)
            new = Label(
                label.mask_crit | (bit & crit_mask),
                label.mask_all | bit,
                label.elem and not (label.mask_all & bit),
                length,
                rc,
                vertex,
                label,
                from_target,
            )
            created += 1
            if _insert(buckets.setdefault(vertex, []), new, adjacency, half_budget, use_dominance):
                queue.append(new)
    return buckets, created


def _forward_vertices(label: Label) -> list:
    out = []
    while label is not None:
        out.append(label.vertex)
        label = label.pred
    out.reverse()
    return out


def _backward_vertices(label: Label) -> list:
    out = []
    while label is not None:
        out.append(label.vertex)
        label = label.pred
    return out


class _Best:
    __slots__ = ("rc", "fwd", "bwd", "elem")

    def __init__(self):
        self.rc = -math.inf
        self.fwd = None
        self.bwd = None
        self.elem = False

    def offer(self, rc, fwd, bwd, elem):
        if rc > self.rc:
            self.rc = rc
            self.fwd = fwd
            self.bwd = bwd
            self.elem = elem

    def vertices(self):
        return tuple(_forward_vertices(self.fwd) + _backward_vertices(self.bwd))


def price(view: ReducedGraphView, duals: DualValues, max_paths: int = 500,
          exclude=frozenset(), early_exit: bool = True, use_dominance: bool = True) -> PricingResult:
    """Search the node's reduced graph for positive-reduced-cost routes.

    ``exclude`` lists vertex sequences already present in the master; they
    are never returned and do not count toward ``max_paths``.  With
    ``early_exit`` the call returns as soon as any improving elementary
    routes are found (adding them and re-solving is cheaper than finishing
    the relaxation); without it the relaxation runs until its own optimum
    is elementary, so ``best_reduced_cost`` is the exact pricing optimum —
    that mode requires an empty ``exclude``.
    """
    if max_paths is not None and max_paths < 1:
        raise ValueError("max_paths must be at least 1")
    if not early_exit and exclude:
        raise ValueError("exact mode cannot exclude routes")
    if not early_exit and max_paths is not None:
        raise ValueError("exact mode cannot cap the number of routes")
    cap = math.inf if max_paths is None else max_paths
    graph = view.graph
    inst = graph.instance
    budget = inst.budget
    half = budget / 2.0
    lambda0 = duals.fleet

    gains = [0.0] * inst.num_targets
    for t in view.active_genuine:
        gains[t] = (inst.targets[t].score - duals.cover.get(t, 0.0)
                    + duals.enforced_targets.get(t, 0.0))
    nu = duals.enforced_connections
    nu_lookup = (lambda a, b: nu.get((a, b), 0.0)) if nu else None

    fwd_adj = view.forward_adjacency()
    bwd_adj = view.backward_adjacency()
    join_adj = view.join_adjacency()
    target_of = graph.target_of

    fwd_seeds = {v: Label(0, 0, True, 0.0, 0.0, v, None, -1)
                 for v in graph.vertices_of(inst.source)}
    bwd_seeds = {v: Label(0, 0, True, 0.0, 0.0, v, None, -1)
                 for v in graph.vertices_of(inst.destination)}

    crit_mask = 0
    iterations = 0
    labels_created = 0
    accumulated: dict[tuple, Route] = {}
    while True:
        iterations += 1
        fwd_buckets, made_f = _sweep(dict(fwd_seeds), fwd_adj, gains, nu_lookup,
                                     half, crit_mask, use_dominance, target_of)
        bwd_buckets, made_b = _sweep(dict(bwd_seeds), bwd_adj, gains, nu_lookup,
                                     half, crit_mask, use_dominance, target_of)
        labels_created += made_f + made_b

        for bucket in fwd_buckets.values():
            bucket.sort(key=lambda lab: lab.length)
        for bucket in bwd_buckets.values():
            bucket.sort(key=lambda lab: lab.length)

        best = _Best()
        best_excl = _Best()
        collected: dict[tuple, Route] = {}
        interrupted = False
        for p in sorted(fwd_buckets):
            if interrupted:
                break
            fwd_labels = fwd_buckets[p]
            for q, cost, tq in join_adj[p]:
                bwd_labels = bwd_buckets.get(q)
                if not bwd_labels:
                    continue
                seam = nu.get((target_of(p), tq), 0.0) if nu else 0.0
                for lf in fwd_labels:
                    room = budget + LENGTH_EPS - lf.length - cost
                    if room < 0.0:
                        break  # fwd labels are length-sorted
                    for lb in bwd_labels:
                        if lb.length > room:
                            break
                        if lf.mask_crit & lb.mask_crit:
                            continue  # a critical target on both sides
                        rc = lf.rc + lb.rc + seam - lambda0
                        elem = lf.elem and lb.elem and not (lf.mask_all & lb.mask_all)
                        best.offer(rc, lf, lb, elem)
                        if rc > best_excl.rc:
                            vertices = tuple(_forward_vertices(lf) + _backward_vertices(lb))
                            if vertices not in exclude:
                                best_excl.offer(rc, lf, lb, elem)
                        if rc > TOL and elem:
                            vertices = tuple(_forward_vertices(lf) + _backward_vertices(lb))
                            if vertices not in exclude and vertices not in collected:
                                collected[vertices] = Route.from_vertices(graph, vertices)
                                if len(collected) >= cap:
                                    interrupted = True
                                    break
                    if interrupted:
                        break
                if interrupted:
                    break

        if early_exit:
            if collected:
                return PricingResult(list(collected.values()), best.rc, best.elem,
                                     iterations, interrupted, labels_created)
            if best_excl.rc <= TOL:
                return PricingResult([], best.rc, best.elem, iterations, False, labels_created)
            growth = best if not best.elem else best_excl
        else:
            accumulated.update(collected)
            if best.rc <= TOL or best.elem:
                return PricingResult(list(accumulated.values()), best.rc, best.elem,
                                     iterations, False, labels_created)
            growth = best

        crit_mask = _grow_critical(crit_mask, growth, target_of)


def _grow_critical(crit_mask: int, growth: _Best, target_of) -> int:
    """Add every multiply-visited target of the chosen join to the critical set."""
    seen = 0
    repeated = 0
    for v in growth.vertices():
        bit = 1 << target_of(v)
        if seen & bit:
            repeated |= bit
        seen |= bit
    new_mask = crit_mask | repeated
    if repeated == 0 or new_mask == crit_mask:
        raise RuntimeError("state-space relaxation failed to make progress")
    return new_mask