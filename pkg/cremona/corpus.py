# cremona/corpus.py
import logging
from pathlib import Path
from string import Template
from typing import Any, Callable, Dict, List

from config import LabConfig
from cremona.constructions import (
    DiagonalSpec,
    ShearSpec,
    a1_a2,
    a1_a2_inverses,
    a2_conjugate_display,
    cremona_involution,
    diagonal_map,
    rho_a1,
    rho_a2,
    shear_lambda,
    sigma_map,
    sl2_projection,
    xi_restrict,
)
from cremona.errors import HypothesisViolationError
from cremona.group_lab import (
    SymbolicDiagonal,
    diag_orbit_classify,
    generator_images,
    no_relation_certificate,
    pingpong_check,
)
from cremona.lattice import LatticeMatrix
from cremona.leading import g_form, leading_pair, predict_leading, rho, valuation_v_fraction
from cremona.newton import is_standard_simplex, newton_body_levels, normalized_volume, sigma_system
from cremona.parser import load_map_file, parse_polynomial
from cremona.polynomial import Polynomial, substitute
from cremona.projective import (
    AffinePolyMap,
    ProjectiveMap,
    ProjectivePoint,
    compose,
    compose_affine,
    conjugate,
    contracts_to_point,
    embed_affine,
    equals_projectively,
    fixes_point,
    jacobian_det,
    verify_inverse_pair,
)

logger = logging.getLogger(__name__)

DATA_FILE = Path(__file__).resolve().parent.parent / "data" / "witness_maps.txt"

CorpusEntry = Callable[[LabConfig], Dict[str, Any]]
CORPUS: Dict[str, CorpusEntry] = {}


class LogTemplates:
    ENTRY_DONE = Template("Corpus entry $name: passed=$passed")


def corpus_entry(name: str):
    def register(func: CorpusEntry) -> CorpusEntry:
        CORPUS[name] = func
        return func
    return register


def entry_names() -> List[str]:
    return sorted(CORPUS)


def run_entry(name: str, config: LabConfig) -> Dict[str, Any]:
    payload = CORPUS[name](config)
    logger.info(LogTemplates.ENTRY_DONE.substitute(name=name, passed=payload["passed"]))
    return payload


def _affine(text: str, m: int) -> AffinePolyMap:
    return AffinePolyMap([parse_polynomial(part, m) for part in text.split(";")])


# треугольные автоморфизмы k^(n-1), записанные через X1..X(n-1)
TRIANGULAR = {
    3: ["X1; X2 + X1^2", "X1 + X2^2; X2", "X1; X2 + 3*X1"],
    4: ["X1; X2; X3 + X1^2", "X1 + X2^2; X2 + X3^2; X3", "X1 + X3; X2; X3 + X2^2"],
}


@corpus_entry("a1_a2_rho")
def a1_a2_rho(config: LabConfig) -> Dict[str, Any]:
    a1, a2 = a1_a2(4)
    m1, m2 = rho(a1), rho(a2)
    ones = ProjectivePoint([1] * 5)
    return {
        "rho_a1": m1,
        "rho_a2": m2,
        "a1": a1,
        "a2": a2,
        "passed": (m1.column(2) == (1, -1, 1, 0) and m2.column(1) == (-1, 1, 1, 0)
                   and m1 == rho_a1(4) and m2 == rho_a2(4)
                   and fixes_point(a1, ones) and fixes_point(a2, ones)),
    }


@corpus_entry("a1_invariance")
def a1_invariance(config: LabConfig) -> Dict[str, Any]:
    a1, _ = a1_a2(4)
    a1_inv, _ = a1_a2_inverses(4)
    checks = {}
    for d in (2, 3):
        lam = shear_lambda(ShearSpec.default(4, d)).shear
        checks[f"d={d}"] = equals_projectively(conjugate(a1, lam, a1_inv), lam)
    return {"checks": checks, "passed": all(checks.values())}


@corpus_entry("a2_display")
def a2_display(config: LabConfig) -> Dict[str, Any]:
    _, a2 = a1_a2(4)
    _, a2_inv = a1_a2_inverses(4)
    checks = {}
    for d in (2, 3):
        spec = ShearSpec.default(4, d)
        computed = conjugate(a2, shear_lambda(spec).shear, a2_inv)
        checks[f"d={d}"] = equals_projectively(computed, a2_conjugate_display(spec))
    return {"checks": checks, "passed": all(checks.values())}


@corpus_entry("contraction")
def contraction(config: LabConfig) -> Dict[str, Any]:
    _, a2 = a1_a2(4)
    _, a2_inv = a1_a2_inverses(4)
    target = ProjectivePoint([0, 0, 0, 0, 1])
    points, plain = {}, {}
    for d in (2, 3):
        lam = shear_lambda(ShearSpec.default(4, d)).shear
        conj = conjugate(a2, lam, a2_inv)
        points[f"d={d}"] = contracts_to_point(conj, 3, config.contraction_attempts)
        plain[f"d={d}"] = contracts_to_point(lam, 3, config.contraction_attempts)
    return {
        "conjugate_image": points,
        "shear_image": plain,
        "passed": all(p == target for p in points.values()) and all(p is None for p in plain.values()),
    }


@corpus_entry("cremona_involution")
def involution(config: LabConfig) -> Dict[str, Any]:
    sigma = cremona_involution(3)
    return {"g_form": g_form(sigma), "passed": g_form(sigma) is None}


@corpus_entry("diag_classify")
def diag_classify(config: LabConfig) -> Dict[str, Any]:
    symbolic = diag_orbit_classify(SymbolicDiagonal.all_equal(4), config.classify_word_length)
    concrete = diag_orbit_classify(DiagonalSpec((2, 3, 5, 7)), config.classify_word_length)
    return {
        "all_equal": symbolic,
        "lambda_2357": concrete,
        "passed": (symbolic.status == "fixed_up_to_L" and symbolic.unconditional
                   and concrete.status == "moved" and len(concrete.witness) <= 2),
    }


@corpus_entry("diag_gform")
def diag_gform(config: LabConfig) -> Dict[str, Any]:
    spec = DiagonalSpec((2, 3, 5))
    f, f_inv = diagonal_map(spec), diagonal_map(spec.inverse())
    data = g_form(f)
    return {
        "g_form": data,
        "rho": rho(f),
        "passed": (data is not None and data.d_f == 1 and rho(f).is_identity()
                   and verify_inverse_pair(f, f_inv)),
    }


@corpus_entry("embed_affine")
def embed_affine_entry(config: LabConfig) -> Dict[str, Any]:
    psi = _affine("X1 + X2^2; X2 + X3^2; X3", 3)
    f = embed_affine(psi)
    shifted = embed_affine(_affine("X1 + 1; X2; X3", 3))
    return {
        "map": f,
        "jacobian": jacobian_det(psi),
        "passed": (g_form(f) is not None and g_form(shifted) is None
                   and jacobian_det(psi) == Polynomial.constant(3, 1)),
    }


@corpus_entry("freegroup_rho")
def freegroup_rho(config: LabConfig) -> Dict[str, Any]:
    image_a, image_b = generator_images("rho", 4)
    distinct = no_relation_certificate(image_a, image_b, config.rho_word_length, config.workers)
    return {"max_length": config.rho_word_length, "distinct": distinct, "passed": distinct}


@corpus_entry("freegroup_sl2")
def freegroup_sl2(config: LabConfig) -> Dict[str, Any]:
    image_a, image_b = generator_images("sl2")
    distinct = no_relation_certificate(image_a, image_b, config.corpus_word_length, config.workers)
    return {"max_length": config.corpus_word_length, "distinct": distinct, "passed": distinct}


@corpus_entry("lambda_fixes_origin")
def lambda_fixes_origin(config: LabConfig) -> Dict[str, Any]:
    origin = ProjectivePoint([1, 0, 0, 0, 0])
    lam = shear_lambda(ShearSpec.default(4, 2)).shear
    sigma = sigma_map(_affine(TRIANGULAR[4][0], 3), 2)
    return {"passed": fixes_point(lam, origin) and fixes_point(sigma, origin)}


@corpus_entry("leading_formula")
def leading_formula(config: LabConfig) -> Dict[str, Any]:
    a1, a2 = a1_a2(4)
    maps = {
        "a1": a1,
        "a2": a2,
        "lambda": shear_lambda(ShearSpec.default(4, 2)).shear,
        "diag": diagonal_map(DiagonalSpec((2, 3, 5, 7))),
    }
    samples = ["X0", "X1", "X0*X1 + X2^2", "X0^2 + X1*X3 - X4^2", "X1*X2*X3 + X0*X4^2"]
    checked, skipped, mismatches = 0, 0, []
    for label, f in maps.items():
        for text in samples:
            h = parse_polynomial(text, 4)
            try:
                predicted = predict_leading(h, f)
            except HypothesisViolationError:
                skipped += 1
                continue
            actual = leading_pair(substitute(h, f.normalized().components))
            checked += 1
            if predicted != actual:
                mismatches.append(f"{label}: {text}")
    return {"checked": checked, "skipped": skipped, "mismatches": mismatches,
            "passed": checked > 0 and not mismatches}


@corpus_entry("newton_simplex")
def newton_simplex(config: LabConfig) -> Dict[str, Any]:
    checks = {}
    for n in (3, 4):
        for d in (2, 3):
            lam = sigma_map(_affine(TRIANGULAR[n][0], n - 1), d)
            levels, stable = newton_body_levels(sigma_system(lam), config.newton_level)
            checks[f"n={n},d={d}"] = (stable and all(is_standard_simplex(p) for p in levels)
                                      and normalized_volume(levels[-1]) == 1)
    return {"checks": checks, "passed": all(checks.values())}


@corpus_entry("witness_maps_file")
def witness_maps_file(config: LabConfig) -> Dict[str, Any]:
    bundle = load_map_file(DATA_FILE)
    a1, a2 = a1_a2(4)
    a1_inv, a2_inv = a1_a2_inverses(4)
    spec = ShearSpec.default(4, 2)
    lam, lam_inv = shear_lambda(spec)
    expected = {
        "a1": a1, "a2": a2, "a1_inv": a1_inv, "a2_inv": a2_inv,
        "lambda": lam, "lambda_inv": lam_inv,
        "a2_conj_lambda": a2_conjugate_display(spec),
        "identity": ProjectiveMap.identity(4),
        "diag": diagonal_map(DiagonalSpec((2, 3, 5, 7))),
        "involution": cremona_involution(4),
    }
    checks = {name: equals_projectively(bundle.get_map(name), f) for name, f in expected.items()}
    checks["xi(lambda) = psi"] = xi_restrict(bundle.get_map("lambda")) == bundle.get_affine("psi")
    return {"checks": checks, "passed": all(checks.values())}


@corpus_entry("pingpong")
def pingpong(config: LabConfig) -> Dict[str, Any]:
    results = {str(m): pingpong_check(m) for m in (2, -2, 1)}
    return {"results": results, "passed": results["2"] and results["-2"] and not results["1"]}


@corpus_entry("rho_functoriality")
def rho_functoriality(config: LabConfig) -> Dict[str, Any]:
    a1, a2 = a1_a2(4)
    lam, lam_inv = shear_lambda(ShearSpec.default(4, 2))
    diag = diagonal_map(DiagonalSpec((2, 3, 5, 7)))
    pairs = {"a1,a2": (a1, a2), "a2,a1": (a2, a1), "a2,lambda": (a2, lam),
             "lambda,a1": (lam, a1), "diag,a2": (diag, a2), "lambda,lambda_inv": (lam, lam_inv)}
    checks = {}
    for label, (g, f) in pairs.items():
        checks[label] = rho(compose(g, f, normalize=True)) == rho(f) @ rho(g)
    return {"checks": checks, "passed": all(checks.values())}


@corpus_entry("shear_inverses")
def shear_inverses(config: LabConfig) -> Dict[str, Any]:
    checks = {}
    for n in (4, 5):
        for d in (2, 3):
            lam, lam_inv = shear_lambda(ShearSpec.default(n, d))
            checks[f"n={n},d={d}"] = (lam_inv is not None and verify_inverse_pair(lam, lam_inv)
                                      and rho(lam).is_identity() and rho(lam_inv).is_identity())
    return {"checks": checks, "passed": all(checks.values())}


@corpus_entry("sigma_maps")
def sigma_maps(config: LabConfig) -> Dict[str, Any]:
    checks = {}
    for text in TRIANGULAR[4]:
        psi = _affine(text, 3)
        lam = sigma_map(psi, 2)
        comps = lam.normalized().components
        unit = [valuation_v_fraction(comps[j], comps[0]) for j in range(1, 5)]
        checks[str(psi)] = (
            unit == [LatticeMatrix.identity(4).column(j) for j in range(4)]
            and rho(lam).is_identity() and xi_restrict(lam) == psi
        )
    return {"checks": checks, "passed": all(checks.values())}


@corpus_entry("sl2_projection")
def sl2_projection_entry(config: LabConfig) -> Dict[str, Any]:
    image_a, image_b = generator_images("rho", 4)
    pa, pb = sl2_projection(image_a), sl2_projection(image_b)
    sl_a, sl_b = generator_images("sl2")
    return {"A": pa, "B": pb, "passed": pa == sl_a and pb == sl_b}


@corpus_entry("xi_homomorphism")
def xi_homomorphism(config: LabConfig) -> Dict[str, Any]:
    shear = shear_lambda(ShearSpec(4, 2, parse_polynomial("X1*X4 + X2^2 + 2*X1*X2", 4))).shear
    first = sigma_map(_affine(TRIANGULAR[4][0], 3), 2)
    second = sigma_map(_affine("X1 + X2^2; X2; X3", 3), 2)
    one = Polynomial.constant(3, 1)
    checks = {}
    for label, (g, f) in {"sigma,sigma": (first, second), "sigma,shear": (first, shear),
                          "shear,sigma": (shear, second)}.items():
        left = xi_restrict(compose(g, f, normalize=True))
        right = compose_affine(xi_restrict(g), xi_restrict(f))
        checks[label] = left == right and jacobian_det(left) == one
    return {"checks": checks, "passed": all(checks.values())}
