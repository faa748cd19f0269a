"""Dictionary between surface/class data and difference-equation types.

The kind of equation is read off the anticanonical configuration after
contracting fiber components; singularity data comes from grouping the
exceptional multiplicities of a Chern class by coincident blowup points.
Distinctions the lattice cannot see (node against cusp, transverse against
tangent) are carried by the stored curve-type tag.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .abelian import Element
from .classify import is_minus_two_class
from .picard import (
    DivisorClass,
    Parity,
    anticanonical_class,
    basis_e,
    basis_f,
    basis_s,
    intersect,
    self_intersection,
)
from .surface import (
    CurveKind,
    PicElement,
    SurfaceData,
    restriction,
)
from .coxeter import ReflectionWord


class EquationKind(enum.Enum):
    SYMMETRIC_ELLIPTIC = "symmetric-elliptic"
    SYMMETRIC_QDIFFERENCE = "symmetric-q-difference"
    SYMMETRIC_ORDINARY = "symmetric-ordinary-difference"
    NONSYMMETRIC_QDIFFERENCE = "nonsymmetric-q-difference"
    NONSYMMETRIC_ORDINARY = "nonsymmetric-ordinary-difference"
    DIFFERENTIAL = "differential"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class SingularPoint:
    point: PicElement
    partition: tuple[int, ...]
    exceptional_indices: tuple[int, ...]


@dataclass(frozen=True)
class EquationReport:
    kind: EquationKind
    order: int
    chern: DivisorClass
    singularities: tuple[SingularPoint, ...]
    rigid: bool
    twist_degree: int
    rigidity_witness: ReflectionWord = ()
    trivial: bool = False
    warnings: tuple[str, ...] = ()


def anticanonical_kind(surface: SurfaceData) -> EquationKind:
    """Equation kind of the anticanonical configuration.

    Components of fiber class are contracted away; what remains is matched
    against the Hirzebruch-level possibilities: one reduced section-pair
    worth of degree (integral), two sections, or a doubled section.  The
    node/cusp and transverse/tangent splittings come from the tag; a
    polygonal tag is treated as transverse crossings.
    """
    tag = surface.curve_type.kind
    f = basis_f(surface.ctx)
    remaining = [
        (cls, mult) for cls, mult in surface.components
        if not _is_fiber_like(cls, f)
    ]
    profile = sorted(
        (mult for cls, mult in remaining if intersect(cls, f) > 0), reverse=True
    )
    section_degree = sum(
        mult * intersect(cls, f) for cls, mult in remaining
    )
    if section_degree != 2:
        return EquationKind.UNCLASSIFIED
    if profile == [2]:
        return EquationKind.DIFFERENTIAL
    if profile == [1, 1]:
        if tag is CurveKind.TANGENT_4:
            return EquationKind.NONSYMMETRIC_ORDINARY
        return EquationKind.NONSYMMETRIC_QDIFFERENCE
    if profile == [1]:
        if tag is CurveKind.SMOOTH_GENUS_ONE:
            return EquationKind.SYMMETRIC_ELLIPTIC
        if tag is CurveKind.CUSP_31:
            return EquationKind.SYMMETRIC_ORDINARY
        if tag in (CurveKind.NODE_211, CurveKind.POLYGON):
            return EquationKind.SYMMETRIC_QDIFFERENCE
        if len(surface.components) > len(remaining):
            # Fiber components were contracted into nodes of the image.
            return EquationKind.SYMMETRIC_QDIFFERENCE
        return EquationKind.UNCLASSIFIED
    return EquationKind.UNCLASSIFIED


def _is_fiber_like(cls: DivisorClass, f: DivisorClass) -> bool:
    return intersect(cls, f) == 0 and cls == f


def interpret(surface: SurfaceData, cls: DivisorClass) -> EquationReport:
    """Read a Chern class as a difference equation on the surface.

    The order is the fiber degree; singular points group the exceptional
    multiplicities by coincident images in Pic(C_alpha), sorted into
    partitions; the equation is rigid exactly when the class is that of a
    -2-curve.
    """
    ctx = surface.ctx
    warnings: list[str] = []
    order = intersect(cls, basis_f(ctx))
    if order < 0:
        raise ValueError("fiber degree is negative; not an equation class")
    image = restriction(surface, cls)
    if any(x != 0 for x in image.pic0):
        warnings.append("class does not restrict trivially to Pic^0; the sheaf meets C_alpha")
    groups: dict[PicElement, list[int]] = {}
    for i in range(1, ctx.m + 1):
        point = restriction(surface, basis_e(ctx, i))
        groups.setdefault(point, []).append(i)
    singular = []
    for point, indices in groups.items():
        multiplicities = [cls.coeffs[1 + i] for i in indices]
        parts = tuple(sorted((x for x in multiplicities if x != 0), reverse=True))
        if any(x < 0 for x in parts):
            warnings.append(
                f"negative exceptional multiplicity at e_{indices}; not a sheaf class"
            )
            parts = tuple(x for x in parts if x > 0)
        if parts:
            singular.append(SingularPoint(point, parts, tuple(indices)))
    rigidity = is_minus_two_class(surface, cls)
    warnings.extend(rigidity.warnings)
    twist_degree = intersect(basis_s(ctx), anticanonical_class(ctx))
    trivial = order == 0 or (
        order == 1 and not singular and self_intersection(cls) == -2
    )
    return EquationReport(
        kind=anticanonical_kind(surface),
        order=order,
        chern=cls,
        singularities=tuple(singular),
        rigid=rigidity.value,
        twist_degree=twist_degree,
        rigidity_witness=rigidity.witness,
        trivial=trivial,
        warnings=tuple(warnings),
    )


def twist_action(surface: SurfaceData, twist: DivisorClass, q: Element) -> SurfaceData:
    """Twist the restriction map: each basis image shifts by (twist . b) q."""
    if twist.ctx != surface.ctx:
        raise ValueError("twist class in the wrong lattice")
    group = surface.pic0
    q = group.reduce(q)
    basis = [basis_s(surface.ctx), basis_f(surface.ctx)] + [
        basis_e(surface.ctx, i) for i in range(1, surface.m + 1)
    ]
    new_images = tuple(
        group.add(img, group.scale(intersect(twist, b), q))
        for img, b in zip(surface.images, basis)
    )
    return SurfaceData(
        surface.ctx, surface.components, surface.curve_type, group, new_images
    )


def duality_action(cls: DivisorClass, x: int) -> tuple[DivisorClass, int]:
    """Serre-duality action on (class, Euler characteristic): x -> D^2 - x."""
    return cls, self_intersection(cls) - x
