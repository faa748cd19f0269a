"""Anticanonical surface data: curve decomposition and Pic^0 restriction.

A surface is modeled by the classes of the components of its anticanonical
curve C_alpha (with multiplicities), an analytic-type tag for the curve,
and a restriction homomorphism Pic(X) -> Pic(C_alpha).  The Pic^0 part of
the target is an abstract finitely generated abelian group; degrees along
components are intersection numbers and are never stored.  This is enough
for every kernel-membership, order, and degree question the walk
algorithms ask.
"""

from __future__ import annotations

import enum
import itertools
import json
import threading
from dataclasses import dataclass, field, replace

from .abelian import AbGroup, Element
from .coxeter import ReflectionWord, RootKind, classify_root, simple_root, simple_roots
from .picard import (
    DivisorClass,
    LatticeContext,
    Parity,
    anticanonical_class,
    basis_e,
    basis_f,
    basis_s,
    canonical_class,
    divisor,
    elementary_transform,
    intersect,
    self_intersection,
)
from . import coxeter


class CurveKind(enum.Enum):
    SMOOTH_GENUS_ONE = "smooth"
    NODE_211 = "211"
    CUSP_31 = "31"
    TWO_SECTIONS_22 = "22"
    TANGENT_4 = "4"
    DOUBLE_0 = "0"
    POLYGON = "polygon"
    OTHER = "other"


@dataclass(frozen=True)
class CurveTypeTag:
    kind: CurveKind
    k: int | None = None
    label: str | None = None

    def as_string(self) -> str:
        if self.kind is CurveKind.POLYGON:
            return f"polygon:{self.k}"
        if self.kind is CurveKind.OTHER:
            return f"other:{self.label or ''}"
        return self.kind.value

    @classmethod
    def from_string(cls, text: str) -> "CurveTypeTag":
        if text.startswith("polygon:"):
            return cls(CurveKind.POLYGON, k=int(text.split(":", 1)[1]))
        if text.startswith("other:"):
            return cls(CurveKind.OTHER, label=text.split(":", 1)[1])
        for kind in CurveKind:
            if kind.value == text and kind not in (CurveKind.POLYGON, CurveKind.OTHER):
                return cls(kind)
        return cls(CurveKind.OTHER, label=text)


SMOOTH = CurveTypeTag(CurveKind.SMOOTH_GENUS_ONE)
NODE_211 = CurveTypeTag(CurveKind.NODE_211)
CUSP_31 = CurveTypeTag(CurveKind.CUSP_31)
TWO_SECTIONS_22 = CurveTypeTag(CurveKind.TWO_SECTIONS_22)
TANGENT_4 = CurveTypeTag(CurveKind.TANGENT_4)
DOUBLE_0 = CurveTypeTag(CurveKind.DOUBLE_0)


def polygon(k: int) -> CurveTypeTag:
    return CurveTypeTag(CurveKind.POLYGON, k=k)


def other_type(label: str) -> CurveTypeTag:
    return CurveTypeTag(CurveKind.OTHER, label=label)


class SurfaceValidationError(ValueError):
    pass


class InadmissibleLetterError(ValueError):
    def __init__(self, stage: int, index: int, root: DivisorClass):
        super().__init__(
            f"letter {index} (root {list(root.coeffs)}) is inadmissible at stage {stage}"
        )
        self.stage = stage
        self.index = index
        self.root = root


@dataclass(frozen=True)
class PicElement:
    degrees: tuple[int, ...]
    pic0: Element

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.degrees) and all(x == 0 for x in self.pic0)


@dataclass(frozen=True)
class RootEffectiveness:
    effective: bool
    via: str  # "kernel" | "component" | "stripping" | "none"
    stripped_component: DivisorClass | None = None
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class SurfaceData:
    ctx: LatticeContext
    components: tuple[tuple[DivisorClass, int], ...]
    curve_type: CurveTypeTag
    pic0: AbGroup
    images: tuple[Element, ...]

    def __post_init__(self) -> None:
        m = self.ctx.m
        if len(self.images) != m + 2:
            raise SurfaceValidationError(
                f"expected {m + 2} basis images, got {len(self.images)}"
            )
        object.__setattr__(
            self, "images", tuple(self.pic0.reduce(img) for img in self.images)
        )
        total = None
        for cls, mult in self.components:
            if cls.ctx != self.ctx:
                raise SurfaceValidationError("component in wrong lattice context")
            if mult < 1:
                raise SurfaceValidationError("component multiplicities must be >= 1")
            piece = mult * cls
            total = piece if total is None else total + piece
        if total is None or total != anticanonical_class(self.ctx):
            raise SurfaceValidationError("components do not sum to the anticanonical class")
        self._check_curve_type()

    def _check_curve_type(self) -> None:
        kind = self.curve_type.kind
        comps = self.components
        anti = anticanonical_class(self.ctx)
        if kind in (CurveKind.SMOOTH_GENUS_ONE, CurveKind.NODE_211, CurveKind.CUSP_31):
            if len(comps) != 1 or comps[0] != (anti, 1):
                raise SurfaceValidationError(f"{kind.value} needs an integral anticanonical curve")
        elif kind in (CurveKind.TWO_SECTIONS_22, CurveKind.TANGENT_4):
            if len(comps) != 2 or any(mult != 1 for _, mult in comps):
                raise SurfaceValidationError(f"{kind.value} needs two reduced components")
            if intersect(comps[0][0], comps[1][0]) != 2:
                raise SurfaceValidationError(f"{kind.value} components must meet twice")
        elif kind is CurveKind.DOUBLE_0:
            if len(comps) != 1 or comps[0][1] != 2:
                raise SurfaceValidationError("double-curve type needs one multiplicity-2 component")
        elif kind is CurveKind.POLYGON:
            if self.curve_type.k != len(comps) or any(mult != 1 for _, mult in comps):
                raise SurfaceValidationError("polygon type needs k reduced components")

    @property
    def m(self) -> int:
        return self.ctx.m

    @property
    def parity(self) -> Parity:
        return self.ctx.parity

    def check_numerically_connected(self) -> None:
        """Every splitting -K = A + B of stored parts must have A.B > 0."""
        units: list[DivisorClass] = []
        for cls, mult in self.components:
            units.extend([cls] * mult)
        total = anticanonical_class(self.ctx)
        zero_cls = total - total
        for bits in itertools.product((0, 1), repeat=len(units)):
            if all(bits) or not any(bits):
                continue
            a = sum((u for u, b in zip(units, bits) if b), zero_cls)
            if intersect(a, total - a) <= 0:
                raise SurfaceValidationError(
                    f"anticanonical splitting {list(a.coeffs)} violates numerical connectedness"
                )

    def basis_image(self, index: int) -> Element:
        return self.images[index]

    def image_of(self, a: DivisorClass) -> Element:
        if a.ctx != self.ctx:
            raise SurfaceValidationError(f"class context {a.ctx} != surface context {self.ctx}")
        acc = self.pic0.zero()
        acc = self.pic0.add(acc, self.pic0.scale(a.coeffs[0], self.images[0]))
        acc = self.pic0.add(acc, self.pic0.scale(a.coeffs[1], self.images[1]))
        for i, r in enumerate(a.coeffs[2:]):
            acc = self.pic0.sub(acc, self.pic0.scale(r, self.images[2 + i]))
        return acc


def restriction(surface: SurfaceData, a: DivisorClass) -> PicElement:
    """The image of a class in Pic(C_alpha): component degrees plus Pic^0 part."""
    if a.ctx != surface.ctx:
        raise SurfaceValidationError(f"class context {a.ctx} != surface context {surface.ctx}")
    degrees = tuple(intersect(a, cls) for cls, _ in surface.components)
    return PicElement(degrees, surface.image_of(a))


def in_kernel(surface: SurfaceData, a: DivisorClass) -> bool:
    return restriction(surface, a).is_zero()


_stripping_stack = threading.local()
_stripping_cache: dict = {}


def root_effectiveness(surface: SurfaceData, root: DivisorClass) -> RootEffectiveness:
    """Effectiveness of a positive real root class, with the rule used.

    A root in the kernel of restriction is effective (a sum of -2-curves);
    a root equal to a stored component is that component; otherwise a
    component C with C^2 < 0 and root.C < 0 is stripped and the general
    effectiveness test decides on root - C.  The stripping branch on a
    reducible curve is sound but only conjecturally complete, so it
    carries a warning.

    An effectiveness certificate is a finite decomposition, so a query
    that recursively depends on itself is cut off as not-effective along
    that route; acyclic routes are unaffected.
    """
    if in_kernel(surface, root):
        return RootEffectiveness(True, "kernel")
    for cls, _ in surface.components:
        if cls == root:
            return RootEffectiveness(True, "component")
    if not any(
        self_intersection(cls) < 0 and intersect(root, cls) < 0
        for cls, _ in surface.components
    ):
        return RootEffectiveness(False, "none")

    key = (surface, root)
    if key in _stripping_cache:
        return _stripping_cache[key]
    active = getattr(_stripping_stack, "active", None)
    if active is None:
        active = set()
        _stripping_stack.active = active
    if key in active:
        return RootEffectiveness(False, "none", warnings=("cyclic stripping dependency cut",))
    top_level = not active
    active.add(key)
    try:
        result = RootEffectiveness(False, "none")
        warnings: list[str] = []
        for cls, _ in surface.components:
            if self_intersection(cls) < 0 and intersect(root, cls) < 0:
                from . import classify  # mutual recursion with the general test

                sub = classify.is_effective(surface, root - cls)
                if sub.effective:
                    if len(surface.components) > 1:
                        warnings.append(
                            "effectiveness of a root on a reducible anticanonical "
                            "curve uses the conjecturally-complete stripping rule"
                        )
                    result = RootEffectiveness(True, "stripping", cls, tuple(warnings))
                    break
    finally:
        active.discard(key)
    # Only answers derived without any in-flight query above them are
    # context-free, hence safe to memoize.
    if top_level:
        if len(_stripping_cache) > 100_000:
            _stripping_cache.clear()
        _stripping_cache[key] = result
    return result


def is_root_effective(surface: SurfaceData, root: DivisorClass) -> bool:
    kind = classify_root(root).kind
    if kind is not RootKind.REAL_POSITIVE:
        raise ValueError(f"not a positive real root: {root} ({kind.value})")
    return root_effectiveness(surface, root).effective


def is_admissible(surface: SurfaceData, root: DivisorClass) -> bool:
    """A simple root is admissible when ineffective or orthogonal to every component."""
    if root not in simple_roots(surface.ctx):
        raise ValueError(f"{root} is not a simple root of the current basis")
    if not root_effectiveness(surface, root).effective:
        return True
    return all(intersect(root, cls) == 0 for cls, _ in surface.components)


def reflect_surface(surface: SurfaceData, root: DivisorClass) -> SurfaceData:
    """Re-express all stored data in the basis reflected in a (-2)-class."""
    new_components = tuple(
        (coxeter.reflect(cls, root), mult) for cls, mult in surface.components
    )
    basis = [basis_s(surface.ctx), basis_f(surface.ctx)] + [
        basis_e(surface.ctx, i) for i in range(1, surface.m + 1)
    ]
    new_images = tuple(surface.image_of(coxeter.reflect(b, root)) for b in basis)
    return replace(surface, components=new_components, images=new_images)


def elementary_transform_surface(surface: SurfaceData) -> SurfaceData:
    """Re-express the surface through the elementary transformation at e_1."""
    if surface.m < 1:
        raise ValueError("elementary transformation needs m >= 1")
    new_ctx = LatticeContext(surface.m, surface.parity.flipped())
    new_components = tuple(
        (elementary_transform(cls), mult) for cls, mult in surface.components
    )
    g = surface.pic0
    img_s, img_f = surface.images[0], surface.images[1]
    img_e1 = surface.images[2]
    if surface.parity is Parity.EVEN:
        new_s = g.sub(img_s, img_e1)
    else:
        new_s = g.sub(g.add(img_s, img_f), img_e1)
    new_e1 = g.sub(img_f, img_e1)
    new_images = (new_s, img_f, new_e1) + surface.images[3:]
    return SurfaceData(new_ctx, new_components, surface.curve_type, g, new_images)


def apply_dot_action(
    surface: SurfaceData, word: ReflectionWord
) -> tuple[SurfaceData, ReflectionWord]:
    """Apply a word of simple reflections under the weak-groupoid dot action.

    Letters act right to left.  An ineffective root acts by the linear
    reflection; an effective-but-admissible root acts trivially; anything
    else raises.  The subword of letters that acted linearly is returned in
    the same right-to-left spelling.
    """
    applied: list[int] = []
    for stage, index in enumerate(reversed(word)):
        root = simple_root(index, surface.ctx)
        eff = root_effectiveness(surface, root)
        if not eff.effective:
            surface = reflect_surface(surface, root)
            applied.append(index)
        elif all(intersect(root, cls) == 0 for cls, _ in surface.components):
            continue
        else:
            raise InadmissibleLetterError(stage, index, root)
    return surface, tuple(reversed(applied))


def blow_down(surface: SurfaceData) -> SurfaceData:
    """Push the surface data forward along the contraction of e_m."""
    m = surface.m
    if m < 1:
        raise ValueError("cannot blow down m=0")
    e_m = basis_e(surface.ctx, m)
    new_ctx = LatticeContext(m - 1, surface.parity)
    new_components: list[tuple[DivisorClass, int]] = []
    max_excess = 0
    for cls, mult in surface.components:
        if cls == e_m:
            continue
        excess = intersect(cls, e_m)
        if excess < 0:
            raise SurfaceValidationError("component other than e_m contains e_m")
        max_excess = max(max_excess, excess)
        new_components.append((divisor(new_ctx, cls.coeffs[:-1]), mult))
    if len(new_components) == 1 and new_components[0][1] == 1 and max_excess <= 1:
        tag = surface.curve_type
    else:
        tag = other_type("pushforward")
    return SurfaceData(
        new_ctx, tuple(new_components), tag, surface.pic0, surface.images[:-1]
    )


def relative_pic_transform(surface: SurfaceData) -> SurfaceData:
    """Quotient the Pic^0 model by the anticanonical restriction.

    Models passing to the minimal regular model of the relative Pic^r of a
    (quasi-)elliptic surface: the combinatorial structure is unchanged and
    the new restriction of K is trivial.
    """
    if any(mult != 1 for _, mult in surface.components):
        raise ValueError("transform requires a reduced anticanonical curve")
    k = canonical_class(surface.ctx)
    image = restriction(surface, k)
    if any(image.degrees):
        raise ValueError("restriction of K has nonzero degree on a component")
    omega = image.pic0
    if surface.pic0.order(omega) is None:
        raise ValueError("restriction of K has infinite order; surface is not (quasi-)elliptic")
    quotient, to_quotient = surface.pic0.quotient_by(omega)
    new_images = tuple(to_quotient(img) for img in surface.images)
    return replace(surface, pic0=quotient, images=new_images)


def combinatorial_type(surface: SurfaceData) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """The invariant sequence of (multiplicity, component class vector)."""
    return tuple((mult, cls.coeffs) for cls, mult in surface.components)


def generic_surface(m: int, parity: Parity = Parity.EVEN) -> SurfaceData:
    """Integral smooth anticanonical curve with a free rank-(m+2) Pic^0 model.

    The basis images are independent generators, so the restriction kernel
    is trivial: the surface has no -2-curves and every root is ineffective.
    """
    ctx = LatticeContext(m, parity)
    group = AbGroup(m + 2)
    images = tuple(group.generator(i) for i in range(m + 2))
    components = ((anticanonical_class(ctx), 1),)
    return SurfaceData(ctx, components, SMOOTH, group, images)


# --- JSON wire format -------------------------------------------------------

def surface_to_dict(surface: SurfaceData) -> dict:
    return {
        "m": surface.m,
        "parity": surface.parity.value,
        "curve_type": surface.curve_type.as_string(),
        "components": [
            {"class": list(cls.coeffs), "multiplicity": mult}
            for cls, mult in surface.components
        ],
        "pic0": {
            "free_rank": surface.pic0.free_rank,
            "torsion": list(surface.pic0.torsion_orders),
        },
        "images": {
            "s": list(surface.images[0]),
            "f": list(surface.images[1]),
            "e": [list(img) for img in surface.images[2:]],
        },
    }


def surface_from_dict(data: dict) -> SurfaceData:
    try:
        m = int(data["m"])
        parity = Parity(data["parity"])
        ctx = LatticeContext(m, parity)
        tag = CurveTypeTag.from_string(data["curve_type"])
        components = tuple(
            (divisor(ctx, entry["class"]), int(entry["multiplicity"]))
            for entry in data["components"]
        )
        group = AbGroup(
            int(data["pic0"]["free_rank"]),
            tuple(int(n) for n in data["pic0"].get("torsion", [])),
        )
        images_data = data["images"]
        e_images = images_data.get("e", [])
        if len(e_images) != m:
            raise SurfaceValidationError(f"expected {m} exceptional images, got {len(e_images)}")
        images = tuple(
            tuple(int(x) for x in coords)
            for coords in [images_data["s"], images_data["f"], *e_images]
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SurfaceValidationError):
            raise
        raise SurfaceValidationError(f"malformed surface data: {exc}") from exc
    return SurfaceData(ctx, components, tag, group, images)


def surface_to_json(surface: SurfaceData) -> str:
    return json.dumps(surface_to_dict(surface), indent=2)


def surface_from_json(text: str) -> SurfaceData:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SurfaceValidationError(f"invalid JSON: {exc}") from exc
    return surface_from_dict(data)
