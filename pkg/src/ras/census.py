"""Finite enumerations: Weyl orbits and the rigid second-order census.

A stratum of the rigid-second-order moduli problem (m = 6, K^2 = 2, class
2s+f-e_1-...-e_6) is a combinatorial degeneration type of the anticanonical
curve: the multiset of (component class, multiplicity) slots in the fixed
even basis, two slots of equal class meaning two distinct curves.  Types
are generated by walking the blowdown chain upward from the even
Hirzebruch surfaces F_0 and F_2, blowing up a point of the anticanonical
curve at each of the six steps; a blowup profile records the multiplicity
of the point on every component.  Surviving types must keep all component
self-intersections >= -2 (no worse -d-curves may exist) and end orthogonal
to the rigid class.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .abelian import AbGroup
from .coxeter import simple_root, simple_roots, reflect
from .picard import (
    DivisorClass,
    LatticeContext,
    Parity,
    divisor,
)
from .surface import SurfaceData, other_type, root_effectiveness

Cls = tuple[int, ...]
Slot = tuple[Cls, int]
State = tuple[Slot, ...]


def weyl_orbit(cls: DivisorClass) -> frozenset[DivisorClass]:
    """Full orbit of a class under the finite Weyl group (m <= 7)."""
    if cls.m > 7:
        raise ValueError("Weyl orbit is infinite for m >= 8")
    roots = simple_roots(cls.ctx)
    seen = {cls}
    frontier = [cls]
    while frontier:
        current = frontier.pop()
        for root in roots:
            image = reflect(current, root)
            if image not in seen:
                seen.add(image)
                frontier.append(image)
    return frozenset(seen)


# --- rigid second-order census -------------------------------------------------

def _self_int(c: Cls) -> int:
    return 2 * c[0] * c[1] - sum(x * x for x in c[2:])


def _pair(a: Cls, b: Cls) -> int:
    return a[0] * b[1] + a[1] * b[0] - sum(x * y for x, y in zip(a[2:], b[2:]))


def _genus(c: Cls) -> int:
    # K = (-2,-2,-1,...): c.K = -2c[0]-2c[1]+sum(r); p_a = 1 + (c^2 + c.K)/2
    ck = -2 * c[0] - 2 * c[1] + sum(c[2:])
    return 1 + (_self_int(c) + ck) // 2


def _canonical(slots) -> State:
    return tuple(sorted(slots))


def _rigid_partial(level: int) -> Cls:
    return (2, 1) + (1,) * level


def _seed_states() -> list[State]:
    """Anticanonical decompositions on the even Hirzebruch surfaces.

    Irreducible classes on F_0 are the two rulings and (a,b) with a,b >= 1;
    on F_2 they are f, the minimal section (1,-1), and (a,b) with b >= a >= 1.
    Classes of negative self-intersection admit a single slot.
    """
    targets = (2, 2)

    # The minimal section comes first so the fiber budget can go negative
    # only while its multiples are being chosen.
    def classes_f0():
        out = [(1, 0), (0, 1)]
        out += [(a, b) for a in (1, 2) for b in (1, 2)]
        return out

    def classes_f2():
        out = [(1, -1), (0, 1)]
        out += [(1, b) for b in (1, 2, 3)]
        out.append((2, 2))
        return out

    def partitions(total: int, negative: bool):
        if total == 0:
            return [()]
        if negative:
            return [(total,)]
        result = []

        def rec(remaining, maximum, acc):
            if remaining == 0:
                result.append(tuple(acc))
                return
            for part in range(min(remaining, maximum), 0, -1):
                rec(remaining - part, part, acc + [part])

        rec(total, total, [])
        return result

    states: set[State] = set()
    for classes in (classes_f0(), classes_f2()):
        def assign(idx, n_left, d_left, chosen):
            if idx == len(classes):
                if n_left == 0 and d_left == 0:
                    states.add(_canonical(chosen))
                return
            cls = classes[idx]
            if cls[1] >= 0 and d_left < 0:
                return
            for count in range(0, 5):
                n2 = n_left - count * cls[0]
                d2 = d_left - count * cls[1]
                if n2 < 0:
                    break
                if cls[1] > 0 and d2 < 0:
                    break
                for partition in partitions(count, _self_int(cls) < 0):
                    assign(idx + 1, n2, d2,
                           chosen + [(cls, mult) for mult in partition])
            return
        assign(0, targets[0], targets[1], [])
    return sorted(states)


def _blowup_profiles(state: State):
    """All ways the next blown-up point can sit on the components.

    A profile gives for each slot the local multiplicity of the point:
    at most 1 on a rational component, at most 2 on an arithmetic-genus-1
    one, pairwise bounded by intersection numbers, and hitting the curve.
    """
    caps = []
    for cls, _mult in state:
        caps.append(1 if _genus(cls) == 0 else 2)
    for profile in product(*(range(c + 1) for c in caps)):
        total = sum(mult * mu for (_, mult), mu in zip(state, profile))
        if total < 1:
            continue
        ok = True
        chosen = [i for i, mu in enumerate(profile) if mu]
        for ai in range(len(chosen)):
            for bi in range(ai + 1, len(chosen)):
                i, j = chosen[ai], chosen[bi]
                if _pair(state[i][0], state[j][0]) < profile[i] * profile[j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield profile, total


def _blow_up_state(state: State, profile, total: int, level: int) -> State | None:
    """Lift a state one level, pruning types that can no longer qualify."""
    partial = _rigid_partial(level + 1)
    slots: list[Slot] = []
    for (cls, mult), mu in zip(state, profile):
        new_cls = cls + (mu,)
        if _self_int(new_cls) < -2:
            return None
        if _pair(partial, new_cls) < 0:
            return None
        slots.append((new_cls, mult))
    if total >= 2:
        exceptional = (0,) * (level + 2) + (-1,)
        if _pair(partial, exceptional) < 0:
            return None
        slots.append((exceptional, total - 1))
    canonical = _canonical(slots)
    seen: dict[Cls, int] = {}
    for cls, _mult in canonical:
        seen[cls] = seen.get(cls, 0) + 1
    for cls, copies in seen.items():
        if copies >= 2 and _self_int(cls) < 0:
            return None
    return canonical


@dataclass(frozen=True)
class CensusResult:
    strata: tuple[State, ...]
    orbit_count: int
    orbit_representatives: tuple[State, ...]
    orbit_index: dict
    audit: tuple[dict, ...]
    refined_count: int


def instantiate_stratum(state: State) -> SurfaceData:
    """Generic surface over a stratum: a free Pic^0 model whose only
    relation forces the rigid class into the restriction kernel."""
    ctx = LatticeContext(6, Parity.EVEN)
    group = AbGroup(7)
    images = [group.generator(i) for i in range(7)]
    forced = group.scale(2, images[0])
    forced = group.add(forced, images[1])
    for i in range(2, 7):
        forced = group.sub(forced, images[i])
    images.append(forced)
    components = tuple((divisor(ctx, cls), mult) for cls, mult in state)
    return SurfaceData(ctx, components, other_type("stratum"), group, tuple(images))


def _d6_images(state: State, ctx: LatticeContext, roots) -> list[State]:
    """Images of a stratum under the weak-groupoid moves of W(D_6).

    A reflection moves the combinatorial type only when its root is
    ineffective on the generic surface of the stratum; effective roots act
    trivially (or not at all) under the dot action.
    """
    surface = instantiate_stratum(state)
    images = []
    for root in roots:
        if root_effectiveness(surface, root).effective:
            continue
        slots = []
        for cls, mult in state:
            d = divisor(ctx, cls)
            slots.append((reflect(d, root).coeffs, mult))
        images.append(_canonical(slots))
    return images


def _refinement_factor(state: State) -> int:
    """Count of analytic sub-types (elliptic / trigonometric / rational).

    Integral types can be smooth, nodal, or cuspidal (three); reduced
    degenerate types split into multiplicative and additive cases (two);
    nonreduced types have additive structure only (one).  A coarse rule:
    the open question on the refined count is tracked in the audit.
    """
    if any(mult >= 2 for _, mult in state):
        return 1
    if len(state) == 1:
        return 3
    return 2


def enumerate_rigid_second_order() -> CensusResult:
    """Census of combinatorial types carrying a rigid second-order equation.

    Deterministic: states are canonicalized and sorted at every level, and
    the audit records one witness generation path per stratum.
    """
    levels: list[dict[State, dict]] = []
    current: dict[State, dict] = {}
    for state in _seed_states():
        current[state] = {"level": 0, "parent": None, "profile": None}
    levels.append(current)
    for level in range(6):
        nxt: dict[State, dict] = {}
        for state in sorted(current):
            for profile, total in _blowup_profiles(state):
                lifted = _blow_up_state(state, profile, total, level)
                if lifted is None or lifted in nxt:
                    continue
                nxt[lifted] = {
                    "level": level + 1,
                    "parent": state,
                    "profile": tuple(profile),
                }
        levels.append(nxt)
        current = nxt

    rigid = _rigid_partial(6)
    strata = tuple(sorted(
        state for state in current
        if all(_pair(rigid, cls) == 0 for cls, _ in state)
    ))

    ctx = LatticeContext(6, Parity.EVEN)
    d6_roots = [simple_root(i, ctx) for i in range(1, 7)]
    stratum_set = set(strata)
    orbit_index: dict[State, int] = {}
    representatives: list[State] = []
    for state in strata:
        if state in orbit_index:
            continue
        label = len(representatives)
        representatives.append(state)
        frontier = [state]
        orbit_index[state] = label
        while frontier:
            node = frontier.pop()
            for image in _d6_images(node, ctx, d6_roots):
                if image not in stratum_set:
                    raise RuntimeError(
                        f"W(D_6) image {image} of a stratum left the census; "
                        "the stratum set is not reflection-stable"
                    )
                if image not in orbit_index:
                    orbit_index[image] = label
                    frontier.append(image)

    audit = []
    for state in strata:
        path = []
        node: State | None = state
        lvl = 6
        while node is not None:
            info = levels[lvl][node]
            path.append({
                "level": lvl,
                "state": [[list(c), m] for c, m in node],
                "profile": list(info["profile"]) if info["profile"] else None,
            })
            node = info["parent"]
            lvl -= 1
        audit.append({
            "stratum": [[list(c), m] for c, m in state],
            "orbit": orbit_index[state],
            "refinement": _refinement_factor(state),
            "path": list(reversed(path)),
        })

    refined = sum(_refinement_factor(s) for s in strata)
    return CensusResult(
        strata=strata,
        orbit_count=len(representatives),
        orbit_representatives=tuple(representatives),
        orbit_index=orbit_index,
        audit=tuple(audit),
        refined_count=refined,
    )
