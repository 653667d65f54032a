"""Variety-side critical-point counting for 3-species models (plane curves).

Two independent routes to the same number:

* the smooth-curve count formula d^2 - 3d + a, with a = number of distinct
  points where the curve meets the distinguished line arrangement
  {x = 0, y = 0, z = 0, x + y + z = 0}, computed exactly; and
* a numeric solve of the determinant critical system on the curve itself.

Both live on the homogeneous side and know nothing about monomial
parameterizations, which is what makes them usable as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import EquilibriumModel
from .poly import (
    MPoly,
    PolyMatrix,
    determinant_fraction_free,
    gcd_degree_in,
    resultant,
    univariate_gcd,
)
from .roots import aberth_roots, complex_roots

COORDS = ("x", "y", "z")
LINES = ("x", "y", "z", "L")

# remaining coordinates after restricting to each line
_REMAINING = {"x": ("y", "z"), "y": ("x", "z"), "z": ("x", "y"), "L": ("x", "y")}

# every point lying on >= 2 of the 4 arrangement lines, with its incidences
ARRANGEMENT_POINTS = (
    ((Fraction(1), Fraction(0), Fraction(0)), ("y", "z")),
    ((Fraction(0), Fraction(1), Fraction(0)), ("x", "z")),
    ((Fraction(0), Fraction(0), Fraction(1)), ("x", "y")),
    ((Fraction(0), Fraction(1), Fraction(-1)), ("x", "L")),
    ((Fraction(1), Fraction(0), Fraction(-1)), ("y", "L")),
    ((Fraction(1), Fraction(-1), Fraction(0)), ("z", "L")),
)


class CurveContainsLineError(ValueError):
    """The curve vanishes identically on an arrangement line."""

    def __init__(self, line: str):
        super().__init__(f"curve contains line {line}: reducible against the arrangement")
        self.line = line


class SingularCurveError(ValueError):
    """Smooth-curve count formula refused: the curve has a singular point."""

    def __init__(self, witness):
        super().__init__(
            "smooth-curve count formula inapplicable: "
            f"singular point near {witness}"
        )
        self.witness = witness


@dataclass(frozen=True)
class PlaneCurve:
    """Homogeneous plane curve F(x, y, z) = 0 of positive degree.

    The context may carry an extra transcendental constant (a generic
    equilibrium constant); degree and homogeneity are measured in the
    coordinate variables only.
    """

    F_hom: MPoly
    degree: int


@dataclass(frozen=True)
class ArrangementCount:
    """Distinct intersection points of the curve with the 4-line arrangement.

    a = sum(per_line_distinct) - shared_point_correction; the correction
    subtracts 1 for each of the 6 pairwise line intersections lying on the
    curve, since those appear in two per-line tallies.
    """

    per_line_distinct: tuple
    shared_point_correction: int
    a: int
    caveats: tuple


@dataclass(frozen=True)
class SmoothnessReport:
    status: str  # "smooth" | "singular" | "undetermined"
    witness: tuple | None
    detail: str


def plane_curve(F_hom: MPoly) -> PlaneCurve:
    if F_hom.is_zero():
        raise ValueError("plane curve needs a nonzero polynomial")
    for name in COORDS:
        if name not in F_hom.ctx:
            raise ValueError(f"plane curve needs coordinate {name!r}")
    coord_idx = [F_hom.ctx.index(name) for name in COORDS]
    degrees = {sum(exp[i] for i in coord_idx) for exp in F_hom.term_map()}
    if len(degrees) != 1:
        raise ValueError("plane curve polynomial must be homogeneous in x, y, z")
    d = degrees.pop()
    if d < 1:
        raise ValueError("plane curve needs positive degree")
    return PlaneCurve(F_hom, d)


def curve_from_model(model: EquilibriumModel) -> PlaneCurve:
    """The model variety as a plane curve; 3-species models only."""
    if len(model.species_vars) != 3:
        raise ValueError("plane-curve route needs exactly 3 species")
    return plane_curve(model.F_hom)


def _pure_power_variable(F: MPoly) -> str | None:
    """The coordinate v when F is c * v^d (d >= 2) up to constants, else None."""
    if len(F.term_map()) != 1:
        return None
    used = [name for name in COORDS if F.uses(name)]
    if len(used) != 1:
        return None
    return used[0] if F.degree_in(used[0]) >= 2 else None


def restrict_to_line(curve: PlaneCurve, line: str) -> MPoly:
    """Binary form: the curve restricted to one arrangement line.

    Coordinate lines set the variable to zero; the sum line substitutes
    z = -(x + y).  A curve containing the line restricts to zero, which is
    flagged instead of returned.
    """
    if line not in LINES:
        raise ValueError(f"unknown line {line!r}; expected one of {LINES}")
    F = curve.F_hom
    if line == "L":
        ctx = F.ctx
        image = MPoly.zero(ctx) - MPoly.var(ctx, "x") - MPoly.var(ctx, "y")
        form = F.substitute({"z": image})
    else:
        form = F.substitute({line: Fraction(0)})
    if form.is_zero():
        raise CurveContainsLineError(line)
    return form


def _distinct_projective_roots(form: MPoly, pair: tuple) -> int:
    """Distinct projective zeros of a binary form in the variable pair.

    Exact: the root at (0:1) is a valuation check, the rest are counted as
    degree minus gcd degree with the derivative after dehomogenizing.  A
    transcendental constant in the context is treated as a variable, which
    keeps the gcd computation exact over the rational function field.
    """
    v, w = pair
    count = 1 if form.valuation_in(v) > 0 else 0
    dehom = form.substitute({v: Fraction(1)})
    deg = dehom.degree_in(w)
    if deg >= 1:
        count += deg - gcd_degree_in(dehom, dehom.partial_derivative(w), w)
    return count


def _vanishes_at(F: MPoly, point: tuple) -> bool:
    value = F.substitute(dict(zip(COORDS, point)))
    return value.is_zero()


def arrangement_count(curve: PlaneCurve) -> ArrangementCount:
    """Count distinct points of curve ∩ arrangement, line by line.

    A non-reduced single-variable power (the K_e = 0 shape) is a multiple
    coordinate line: only its two corner points with the other coordinate
    lines are counted; the contained line and the sum line are skipped with
    caveats, matching the degenerate-case convention a = 2.
    """
    power_var = _pure_power_variable(curve.F_hom)
    if power_var is not None:
        per = tuple(
            0 if line in (power_var, "L") else 1 for line in LINES
        )
        caveats = (
            f"curve contains line {power_var}: reducible against the arrangement; "
            "skipped in the count",
            "restriction to the sum line has its only root on the contained "
            "line; not counted",
        )
        return ArrangementCount(per, 0, sum(per), caveats)

    per = []
    caveats = []
    skipped = set()
    for line in LINES:
        try:
            form = restrict_to_line(curve, line)
        except CurveContainsLineError as exc:
            skipped.add(line)
            per.append(0)
            caveats.append(f"{exc}; skipped in the count")
            continue
        per.append(_distinct_projective_roots(form, _REMAINING[line]))
    correction = 0
    for point, incident in ARRANGEMENT_POINTS:
        if any(line in skipped for line in incident):
            continue
        if _vanishes_at(curve.F_hom, point):
            correction += 1
    return ArrangementCount(tuple(per), correction, sum(per) - correction, tuple(caveats))


def _slice_coeffs(poly: MPoly, variable: str, bindings: dict) -> list:
    """Ascending complex coefficients of poly in variable with the other
    used variables bound numerically."""
    buckets = poly.as_univariate(variable)
    top = max(buckets) if buckets else 0
    point = dict(bindings)
    point[variable] = 0.0
    out = [0j] * (top + 1)
    for k, coeff in buckets.items():
        out[k] = coeff.eval_complex(point)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _normalize_projective(coords: tuple) -> tuple:
    scale = max(abs(c) for c in coords)
    return tuple(c / scale for c in coords)


def _projective_distance(p: tuple, q: tuple) -> float:
    """Norm of the cross product of max-norm-normalized representatives."""
    a = _normalize_projective(p)
    b = _normalize_projective(q)
    cross = (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
    return max(abs(c) for c in cross)


def smoothness_check(curve: PlaneCurve) -> SmoothnessReport:
    """Search for common projective zeros of the three partial derivatives.

    By the homogeneous scaling relation d*F = x*Fx + y*Fy + z*Fz, any such
    zero automatically lies on the curve, so only the partials are
    eliminated.  Per affine patch the partials are reduced to univariate
    eliminants; a nonzero constant gcd proves the patch clean exactly, and
    nonconstant candidates are isolated numerically and confirmed singular
    only when every residual is below 1e-10.
    """
    F = curve.F_hom
    power_var = _pure_power_variable(F)
    if power_var is not None:
        witness = {
            "x": (0.0 + 0j, 1.0 + 0j, 0.0 + 0j),
            "y": (1.0 + 0j, 0.0 + 0j, 0.0 + 0j),
            "z": (1.0 + 0j, 0.0 + 0j, 0.0 + 0j),
        }[power_var]
        return SmoothnessReport(
            "singular", witness, f"non-reduced: a power of {power_var}"
        )
    if curve.degree == 1:
        return SmoothnessReport("smooth", None, "degree 1")
    partials = {name: F.partial_derivative(name) for name in COORDS}
    symbolic = any(poly.uses(name) for poly in partials.values()
                   for name in poly.ctx.names if name not in COORDS)
    pending = None
    for patch in COORDS:
        others = tuple(name for name in COORDS if name != patch)
        reduced = []
        clean = False
        for name in COORDS:
            q = partials[name].substitute({patch: Fraction(1)})
            if q.is_zero():
                continue
            if not any(q.uses(o) for o in others):
                # nonzero and free of both patch unknowns: no common zero here
                clean = True
                break
            reduced.append(q)
        if clean:
            continue
        witness = _patch_singular_search(F, partials, patch, others, reduced, symbolic)
        if isinstance(witness, tuple):
            return SmoothnessReport("singular", witness, f"confirmed in patch {patch} = 1")
        if witness == "pending":
            pending = patch
    if pending is not None:
        return SmoothnessReport(
            "undetermined", None,
            f"exact candidates in patch {pending} = 1 lack numeric confirmation",
        )
    return SmoothnessReport("smooth", None, "all patch eliminants are nonzero constants")


def _patch_singular_search(F, partials, patch, others, reduced, symbolic):
    """Candidates for common zeros of the partials in one affine patch.

    Returns a witness tuple when a candidate passes the residual test,
    "pending" when exact candidates exist but none confirm, or "clean" when
    the eliminant gcd is a nonzero constant.
    """
    u_var, v_var = others
    univariate = [q for q in reduced if q.degree_in(v_var) == 0]
    bivariate = [q for q in reduced if q.degree_in(v_var) > 0]
    for i in range(len(bivariate)):
        for j in range(i + 1, len(bivariate)):
            r = resultant(bivariate[i], bivariate[j], v_var)
            if not r.is_zero():
                univariate.append(r)

    candidates_u: list[complex] = []
    if not univariate:
        # all partials share a factor: sample rational lines to land on it
        if symbolic:
            return "pending"
        probe = reduced[0]
        for v0 in (Fraction(0), Fraction(1), Fraction(-1), Fraction(2),
                   Fraction(-2), Fraction(1, 2), Fraction(3)):
            coeffs = _slice_coeffs(probe, u_var, {v_var: complex(v0)})
            if len(coeffs) > 1:
                for u0 in aberth_roots(coeffs):
                    witness = _confirm_singular(
                        F, partials, patch, others, u0, complex(v0)
                    )
                    if witness is not None:
                        return witness
        return "pending"

    if symbolic:
        # exact constancy test over the rational function field
        if len(univariate) == 1:
            constant = univariate[0].degree_in(u_var) == 0
        else:
            constant = any(
                gcd_degree_in(univariate[0], other, u_var) == 0
                for other in univariate[1:]
            )
        return "clean" if constant else "pending"

    gcd_poly = univariate[0]
    for other in univariate[1:]:
        gcd_poly = univariate_gcd(gcd_poly, other, u_var)
    if gcd_poly.degree_in(u_var) == 0:
        return "clean"
    for u0, _ in complex_roots(gcd_poly, u_var):
        v_sources = bivariate or reduced
        for source in v_sources:
            coeffs = _slice_coeffs(source, v_var, {u_var: u0})
            for v0 in aberth_roots(coeffs):
                witness = _confirm_singular(F, partials, patch, others, u0, v0)
                if witness is not None:
                    return witness
    return "pending"


def _confirm_singular(F, partials, patch, others, u0, v0):
    point = {patch: 1.0 + 0j, others[0]: u0, others[1]: v0}
    coords = tuple(point[name] for name in COORDS)
    normalized = _normalize_projective(coords)
    binding = dict(zip(COORDS, normalized))
    residuals = [abs(F.eval_complex(binding))]
    for name in COORDS:
        residuals.append(abs(partials[name].eval_complex(binding)))
    if max(residuals) < 1e-10:
        return normalized
    return None


def ml_degree_curve(curve: PlaneCurve) -> int:
    """Critical-point count of a smooth curve: d^2 - 3d + a.

    Non-reduced single-variable powers return the degenerate-case
    convention 0 directly; any other singular curve is refused with the
    witness, and an undetermined smoothness check is refused conservatively.
    """
    if _pure_power_variable(curve.F_hom) is not None:
        return 0
    report = smoothness_check(curve)
    if report.status == "singular":
        raise SingularCurveError(report.witness)
    if report.status == "undetermined":
        raise ValueError(
            "smooth-curve count formula needs a smoothness certificate: "
            + report.detail
        )
    d = curve.degree
    return d * d - 3 * d + arrangement_count(curve).a


def variety_critical_system(curve: PlaneCurve, counts: tuple) -> tuple:
    """The determinant critical system on the curve.

    Equation 1 is the curve itself; equation 2 is the 3x3 determinant with
    rows (1,1,1), (u0*y*z, u1*x*z, u2*x*y) and the gradient, homogeneous of
    degree d + 1.  The middle row is the likelihood gradient row cleared of
    denominators by x*y*z; the extra zeros that introduces lie on the
    arrangement and are discarded downstream.
    """
    if len(counts) != 3:
        raise ValueError("variety critical system needs 3 observation counts")
    if any(c <= 0 for c in counts):
        raise ValueError("observation counts must be positive")
    ctx = curve.F_hom.ctx
    x, y, z = (MPoly.var(ctx, name) for name in COORDS)
    u0, u1, u2 = (MPoly.const(ctx, Fraction(c)) for c in counts)
    one = MPoly.const(ctx, Fraction(1))
    rows = (
        (one, one, one),
        (u0 * y * z, u1 * x * z, u2 * x * y),
        tuple(curve.F_hom.partial_derivative(name) for name in COORDS),
    )
    eq2 = determinant_fraction_free(PolyMatrix(rows))
    return curve.F_hom, eq2


def count_critical_points_variety(
    curve: PlaneCurve,
    counts: tuple,
    tol_residual: float = 1e-9,
    tol_position: float = 1e-9,
    tol_cluster: float = 1e-7,
    tol_witness: float = 1e-7,
) -> tuple:
    """Numeric critical points of the determinant system off the arrangement.

    Works in the patch z = 1 (points with z = 0 lie on the arrangement and
    are discarded regardless): eliminate y by resultant, root-find, and
    back-substitute.  Candidates are kept when both equation residuals at
    the max-norm-normalized point are below tol_residual; then points on
    the arrangement, points near a singular witness, and projective
    duplicates are discarded.  Distances within 10x of a discard threshold
    are flagged on the surviving point for exact re-checking.
    """
    for name in curve.F_hom.ctx.names:
        if name not in COORDS:
            raise ValueError("numeric counting needs a numeric equilibrium constant")
    if _pure_power_variable(curve.F_hom) is not None:
        raise ValueError("numeric counting refuses a non-reduced curve")
    eq1, eq2 = variety_critical_system(curve, counts)
    witnesses = []
    report = smoothness_check(curve)
    if report.status == "singular":
        witnesses.append(report.witness)

    e1 = eq1.substitute({"z": Fraction(1)})
    e2 = eq2.substitute({"z": Fraction(1)})
    first, second = "x", "y"
    eliminant = resultant(e1, e2, second)
    if eliminant.is_zero():
        first, second = "y", "x"
        eliminant = resultant(e1, e2, second)
        if eliminant.is_zero():
            raise ValueError("critical system shares a component with the curve")

    candidates = []
    for root, _ in complex_roots(eliminant, first):
        coeffs = _slice_coeffs(e1, second, {first: root})
        if len(coeffs) < 2:
            continue
        for partner in aberth_roots(coeffs):
            point = {first: root, second: partner, "z": 1.0 + 0j}
            candidates.append((point["x"], point["y"], point["z"]))

    kept = []
    for coords in candidates:
        normalized = _normalize_projective(coords)
        binding = dict(zip(COORDS, normalized))
        residual = max(abs(eq1.eval_complex(binding)), abs(eq2.eval_complex(binding)))
        if residual >= tol_residual:
            continue
        flags = []
        margins = [abs(c) for c in normalized]
        margins.append(abs(sum(normalized)))
        if any(m < tol_position for m in margins):
            continue
        if any(m < 10 * tol_position for m in margins):
            flags.append("within 10x of the arrangement-discard threshold")
        near_witness = False
        for witness in witnesses:
            gap = _projective_distance(normalized, witness)
            if gap < tol_witness:
                near_witness = True
                break
            if gap < 10 * tol_witness:
                flags.append("within 10x of the singular-witness threshold")
        if near_witness:
            continue
        duplicate = False
        for entry in kept:
            gap = _projective_distance(normalized, entry["coords"])
            if gap < tol_cluster:
                duplicate = True
                break
            if gap < 10 * tol_cluster:
                flags.append("within 10x of the clustering threshold")
        if duplicate:
            continue
        kept.append(
            {"coords": normalized, "residual_max": residual, "flags": tuple(flags)}
        )
    return len(kept), kept


@dataclass(frozen=True)
class CurveMLReport:
    """Variety-side count with its certificate trail, for display."""

    degree: int
    smoothness: SmoothnessReport
    arrangement: ArrangementCount | None
    ml_degree: int | None
    caveats: tuple
    method: str = "curve"

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "degree": self.degree,
            "smoothness": self.smoothness.status,
            "arrangement_a": None if self.arrangement is None else self.arrangement.a,
            "per_line_distinct": None
            if self.arrangement is None
            else list(self.arrangement.per_line_distinct),
            "ml_degree_curve": self.ml_degree,
            "caveats": list(self.caveats),
        }


def curve_ml_report(curve: PlaneCurve) -> CurveMLReport:
    """Formula-route count with graceful refusal instead of exceptions."""
    caveats = []
    if _pure_power_variable(curve.F_hom) is not None:
        arrangement = arrangement_count(curve)
        caveats.extend(arrangement.caveats)
        caveats.append("non-reduced curve: count 0 by the degenerate-case convention")
        smoothness = smoothness_check(curve)
        return CurveMLReport(curve.degree, smoothness, arrangement, 0, tuple(caveats))
    smoothness = smoothness_check(curve)
    if smoothness.status == "singular":
        caveats.append(
            "smooth-curve count formula inapplicable: singular point near "
            f"{_format_witness(smoothness.witness)}"
        )
        return CurveMLReport(curve.degree, smoothness, None, None, tuple(caveats))
    if smoothness.status == "undetermined":
        caveats.append("smoothness undetermined: " + smoothness.detail)
        return CurveMLReport(curve.degree, smoothness, None, None, tuple(caveats))
    arrangement = arrangement_count(curve)
    caveats.extend(arrangement.caveats)
    d = curve.degree
    return CurveMLReport(
        curve.degree, smoothness, arrangement, d * d - 3 * d + arrangement.a, tuple(caveats)
    )


def _format_witness(witness) -> str:
    if witness is None:
        return "(unknown)"
    parts = []
    for c in witness:
        c = complex(c)
        if abs(c.imag) < 1e-12:
            parts.append(f"{c.real:.6g}")
        else:
            parts.append(f"{c.real:.6g}{c.imag:+.6g}i")
    return "(" + " : ".join(parts) + ")"
