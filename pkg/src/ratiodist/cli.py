"""Command-line verification harness.

Every check emits one JSON record per line with the command echo, its
inputs, exact results (integers and rationals serialized as strings),
a verdict of pass / fail / vacuous, and the wall time.  Randomized
commands require an explicit seed and reproduce their verdict-bearing
fields exactly on identical configuration.  The process exits 0 only when
every verdict is pass or vacuous, 1 on any fail, and 2 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .counting import (
    nu_brute,
    nu_fourier,
    nu_fourier_profile,
    nu_lower_bound,
    nu_lower_bound_d4,
    nu_profile_brute,
    phi_image,
    threshold_experiment,
)
from .cyclotomic import (
    complex_embed,
    completed_square_sum,
    gauss_sum,
    gauss_sum_embedding,
    orthogonality_sum,
    verify_gauss_square,
)
from .field import CapExceededError, Field, is_prime
from .fourier import dft, inversion_check, load_pointset, plancherel_sum, random_pointset
from .isotropic import max_isotropic_brute, max_isotropic_construct, max_isotropic_dim, sharpness_set, verify_null
from .varieties import verify_rt_ft, verify_s0_ft, zero_sphere

import random

__all__ = ["BATTERIES", "main", "run_suite"]

EMBED_TOL = 1e-9


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _run_check(command, inputs, fn):
    """Execute one check, timing it and turning exceptions into error records."""
    t0 = time.perf_counter()
    rec = {"command": command, "inputs": inputs}
    try:
        verdict, results = fn()
        rec["results"] = results
        rec["verdict"] = verdict
    except (ValueError, ArithmeticError, OSError, CapExceededError) as exc:
        rec["error"] = str(exc)
        rec["verdict"] = "error"
    rec["wall_time_s"] = round(time.perf_counter() - t0, 6)
    return rec


def _odd_prime_powers(qmax):
    out = []
    for p in range(3, qmax + 1, 2):
        if not is_prime(p):
            continue
        ell = 1
        while p**ell <= qmax:
            out.append((p, ell))
            ell += 1
    return sorted(out, key=lambda t: t[0] ** t[1])


# -- batteries -----------------------------------------------------------------


def battery_gauss(cfg):
    """Character-sum identities: square law, classical embedding, completed
    squares, and orthogonality, over every odd prime power up to qmax."""
    qmax = int(cfg.get("qmax", 49))
    cap = cfg.get("cap")
    records = []
    for p, ell in _odd_prime_powers(qmax):
        field = Field(p, ell, cap=cap)

        def check(field=field):
            g = gauss_sum(field, 1)
            square_ok = verify_gauss_square(field)
            emb = complex_embed(g)
            ref = gauss_sum_embedding(field)
            err = abs(emb - ref)
            results = {
                "gauss": g.report(),
                "square_exact": square_ok,
                "reference_embedding": _fmt_complex(ref),
                "embedding_error": f"{err:.3e}",
            }
            return ("pass" if square_ok and err <= EMBED_TOL else "fail", results)

        records.append(_run_check("gauss", {"q": field.designation()}, check))
    for p, ell in _odd_prime_powers(min(qmax, 13)):
        field = Field(p, ell, cap=cap)

        def check(field=field):
            pairs = 0
            try:
                for a in range(1, field.q):
                    for b in range(field.q):
                        completed_square_sum(field, a, b)
                        pairs += 1
            except ArithmeticError as exc:
                return ("fail", {"pairs_checked": pairs, "mismatch": str(exc)})
            return ("pass", {"pairs_checked": pairs})

        records.append(_run_check("completed-square", {"q": field.designation()}, check))

        def check_orth(field=field):
            n = 2
            ok = orthogonality_sum(field, (0,) * n) == field.q**n
            ok = ok and not orthogonality_sum(field, (1,) + (0,) * (n - 1))
            return ("pass" if ok else "fail", {"dimension": n})

        records.append(_run_check("orthogonality", {"q": field.designation()}, check_orth))
    return records


def battery_sphere_ft(cfg):
    """Zero-sphere transforms against their closed forms, plus resynthesis
    and the exact norm-square identity on the same tables."""
    pairs = cfg.get("pairs", [(2, 3), (2, 5), (3, 3), (4, 3)])
    cap = cfg.get("cap")
    records = []
    for n, q in pairs:
        field = Field.parse(q, cap=cap)

        def check(field=field, n=n):
            res = verify_s0_ft(field, n, cap)
            sphere = zero_sphere(field, n, cap)
            table = dft(sphere, cap)
            pl = plancherel_sum(table)
            pl_ok = pl == Fraction(len(sphere), field.q**n)
            inv_ok = inversion_check(sphere, table, cap)
            results = {
                "frequencies": res.checked,
                "sphere_size": len(sphere),
                "plancherel": str(pl),
                "plancherel_exact": pl_ok,
                "inversion_exact": inv_ok,
            }
            if res.failure:
                results["counterexample"] = res.failure
            return ("pass" if res.ok and pl_ok and inv_ok else "fail", results)

        records.append(_run_check("sphere-ft", {"q": field.designation(), "n": n}, check))
    return records


def battery_rt_ft(cfg):
    """Ratio-sphere transforms against the closed form, all levels, all frequencies."""
    pairs = cfg.get("pairs", [(4, 3), (6, 3)])
    cap = cfg.get("cap")
    records = []
    for d, q in pairs:
        field = Field.parse(q, cap=cap)

        def check(field=field, d=d):
            res = verify_rt_ft(field, d, cap)
            results = {"checks": res.checked}
            if res.failure:
                results["counterexample"] = res.failure
            return ("pass" if res.ok else "fail", results)

        records.append(_run_check("rt-ft", {"q": field.designation(), "d": d}, check))
    return records


def battery_nu_cross(cfg):
    """Brute-force against spectral pair counts on seeded random sets."""
    field = Field.parse(cfg["q"], cap=cfg.get("cap"))
    d = int(cfg["d"])
    sizes = cfg["sizes"]
    samples = int(cfg["samples"])
    rng = random.Random(int(cfg["seed"]))
    cap = cfg.get("cap")
    records = []
    for size in sizes:
        for sample in range(samples):
            pset = random_pointset(field, d, size, rng, cap)

            def check(pset=pset):
                brute = nu_profile_brute(pset)
                spectral = nu_fourier_profile(pset, cap)
                bad = [t for t in range(1, field.q) if spectral[t] != int(brute[t])]
                total_ok = int(brute.sum()) == len(pset) ** 2
                results = {
                    "size": len(pset),
                    "nu_brute": {str(t): str(int(brute[t])) for t in range(field.q)},
                    "nu_fourier": {str(t): str(spectral[t]) for t in range(1, field.q)},
                    "pair_total_exact": total_ok,
                }
                if bad:
                    results["disagreements"] = bad
                return ("pass" if not bad and total_ok else "fail", results)

            inputs = {"q": field.designation(), "d": d, "size": size, "sample": sample, "seed": cfg["seed"]}
            records.append(_run_check("nu-cross", inputs, check))
    return records


def battery_coverage_d4(cfg):
    """Dimension-4 coverage at the q**2 threshold: every seeded random set one
    point above it must attain every ratio value, with the counts at least
    the displayed bound.  Requires q ≡ 3 (mod 4)."""
    field = Field.parse(cfg["q"], cap=cfg.get("cap"))
    q = field.q
    if q % 4 != 3:
        raise ValueError(f"the dimension-4 coverage threshold needs q ≡ 3 (mod 4), got q={q}")
    samples = int(cfg.get("samples", 100))
    seed = int(cfg["seed"])
    cap = cfg.get("cap")
    size = q * q + 1
    bound = nu_lower_bound_d4(size, q)
    rng = random.Random(seed)
    records = []
    covered = 0
    for sample in range(samples):
        pset = random_pointset(field, 4, size, rng, cap)

        def check(pset=pset):
            profile = nu_fourier_profile(pset, cap)
            minimum = min(profile.values())
            full = all(v > 0 for v in profile.values())
            ok = full and minimum >= bound
            return (
                "pass" if ok else "fail",
                {"size": size, "full_image": full, "min_nu": str(minimum), "bound": str(bound)},
            )

        rec = _run_check(
            "theorem-1.2", {"q": field.designation(), "sample": sample, "seed": seed}, check
        )
        covered += rec.get("verdict") == "pass"
        records.append(rec)
    summary = threshold_experiment(field, 4, [size], min(samples, 10), seed, cap=cap)
    records.append(
        {
            "command": "theorem-1.2",
            "inputs": {"q": field.designation(), "seed": seed, "samples": samples},
            "results": {"passed": covered, "samples": samples, "threshold_experiment": summary},
            "verdict": "pass" if covered == samples else "fail",
            "wall_time_s": 0.0,
        }
    )
    return records


def battery_bounds(cfg):
    """General-dimension lower bounds on seeded random sets and the
    constructed product set; nonpositive bounds are recorded as vacuous."""
    field = Field.parse(cfg["q"], cap=cfg.get("cap"))
    q = field.q
    d = int(cfg["d"])
    sizes = cfg.get("sizes") or [int(cfg["size"])]
    samples = int(cfg.get("samples", 2))
    seed = int(cfg["seed"])
    cap = cfg.get("cap")
    if d % 4 == 0:
        cases = ["B"] + (["A"] if d % 8 == 4 and q % 4 == 3 else [])
    else:
        cases = ["part2"]
    rng = random.Random(seed)
    records = []
    for size in sizes:
        sets = [("random", random_pointset(field, d, size, rng, cap)) for _ in range(samples)]
        sharp = sharpness_set(field, d, cap)
        if sharp.expected_size == size:
            sets.append(("constructed", sharp.points))
        for origin, pset in sets:

            def check(pset=pset):
                profile = nu_fourier_profile(pset, cap)
                minimum = min(profile.values())
                results = {"size": len(pset), "min_nu": str(minimum), "bounds": {}}
                verdicts = []
                for case in cases:
                    bound = nu_lower_bound(len(pset), q, d, case)
                    vacuous = bound <= 0
                    holds = minimum >= bound
                    results["bounds"][case] = {
                        "value": str(bound),
                        "vacuous": vacuous,
                        "holds": holds,
                    }
                    verdicts.append("vacuous" if vacuous else ("pass" if holds else "fail"))
                if "fail" in verdicts:
                    verdict = "fail"
                elif "pass" in verdicts:
                    verdict = "pass"
                else:
                    verdict = "vacuous"
                return (verdict, results)

            inputs = {"q": field.designation(), "d": d, "size": size, "set": origin, "seed": seed}
            records.append(_run_check("theorem-1.3-bounds", inputs, check))
    return records


def battery_sharpness(cfg):
    """Constructed product sets: exact claimed sizes and ratio image {0}."""
    pairs = cfg.get("pairs", [(4, 3), (4, 5), (6, 3), (8, 3), (12, 3)])
    cap = cfg.get("cap")
    seed = int(cfg.get("seed", 0))
    records = []
    for d, q in pairs:
        field = Field.parse(q, cap=cap)

        def check(field=field, d=d):
            sharp = sharpness_set(field, d, cap)
            outcome = verify_null(sharp, seed=seed)
            results = {
                "case": sharp.case,
                "size_claim": sharp.size_claim,
                "expected_size": sharp.expected_size,
                "actual_size": len(sharp.points),
                "basis": [list(v) for v in sharp.subspace.basis],
                "verification": outcome,
            }
            ok = outcome["ok"] and len(sharp.points) == sharp.expected_size
            return ("pass" if ok else "fail", results)

        records.append(_run_check("sharpness", {"q": field.designation(), "d": d}, check))
    return records


def battery_isotropic(cfg):
    """Constructed maximal null subspaces against the exhaustive search."""
    pairs = cfg.get("pairs")
    if pairs is None:
        pairs = [(n, q) for q in (3, 5, 7) for n in (2, 3, 4, 5)] + [(6, 3)]
    records = []
    for n, q in pairs:
        field = Field.parse(q, cap=cfg.get("cap"))

        def check(field=field, n=n):
            basis = max_isotropic_construct(field, n)
            brute = max_isotropic_brute(field, n, cfg.get("brute_cap"))
            results = {
                "constructed_dim": basis.dim,
                "brute_dim": brute,
                "classified_dim": max_isotropic_dim(field, n),
                "basis": [list(v) for v in basis.basis],
                "gram_zero": basis.is_null_certified(),
            }
            ok = basis.dim == brute == max_isotropic_dim(field, n) and results["gram_zero"]
            return ("pass" if ok else "fail", results)

        records.append(_run_check("isotropic", {"q": field.designation(), "n": n}, check))
    return records


BATTERIES = {
    "gauss": battery_gauss,
    "sphere-ft": battery_sphere_ft,
    "rt-ft": battery_rt_ft,
    "nu-cross": battery_nu_cross,
    "theorem-1.2": battery_coverage_d4,
    "theorem-1.3-bounds": battery_bounds,
    "sharpness": battery_sharpness,
    "isotropic": battery_isotropic,
}

_SUITE_DEFAULTS = {
    "gauss": {},
    "sphere-ft": {},
    "rt-ft": {},
    "nu-cross": {"q": "3", "d": 4, "sizes": [5, 9], "samples": 3},
    "theorem-1.2": {"q": "3", "samples": 25},
    "theorem-1.3-bounds": {"q": "3", "d": 8, "sizes": [729], "samples": 2},
    "sharpness": {},
    "isotropic": {},
}


def run_suite(battery: str, config: dict) -> list:
    """Execute one named verification battery and return its records."""
    fn = BATTERIES.get(battery)
    if fn is None:
        raise ValueError(f"unknown battery {battery!r}; expected one of {sorted(BATTERIES)}")
    return fn(config)


# -- command-line front end ------------------------------------------------------


def _parse_sizes(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}, expected e.g. 9,10,27") from None


def _field_from_args(args):
    if getattr(args, "p", None) is not None:
        return Field(args.p, args.ell or 1, cap=args.cap)
    if getattr(args, "q", None) is None:
        raise ValueError("a field designation is required: --q or --p/--ell")
    return Field.parse(args.q, cap=args.cap)


def _load_set(args, field=None):
    pset = load_pointset(args.set, field=field, cap=args.cap)
    if getattr(args, "q", None) is not None:
        want = Field.parse(args.q, cap=args.cap)
        if want != pset.field:
            raise ValueError(f"set file field {pset.field.designation()} does not match --q {args.q}")
    if getattr(args, "d", None) is not None and args.d != pset.n:
        raise ValueError(f"set file dimension {pset.n} does not match --d {args.d}")
    return pset


def _cmd_gauss(args):
    return run_suite("gauss", {"qmax": args.qmax, "cap": args.cap})


def _cmd_sphere_ft(args):
    field = _field_from_args(args)
    return run_suite("sphere-ft", {"pairs": [(args.n, field.designation())], "cap": args.cap})


def _cmd_rt_ft(args):
    field = _field_from_args(args)
    return run_suite("rt-ft", {"pairs": [(args.d, field.designation())], "cap": args.cap})


def _cmd_nu(args):
    pset = _load_set(args)
    field = pset.field
    levels = [args.t] if args.t is not None else list(range(field.q))
    records = []
    for t in levels:

        def check(t=t):
            results = {"size": len(pset), "t": t}
            brute = spectral = None
            if args.method in ("both", "brute"):
                brute = nu_brute(pset, t)
                results["nu_brute"] = str(brute)
            if args.method in ("both", "fourier") and t != 0:
                spectral = nu_fourier(pset, t, args.cap)
                results["nu_fourier"] = str(spectral)
            if t == 0 and args.method == "fourier":
                raise ValueError("the spectral identity only covers t != 0; use the brute count at 0")
            if brute is not None and spectral is not None:
                results["agree"] = brute == spectral
                return ("pass" if brute == spectral else "fail", results)
            return ("pass", results)

        records.append(_run_check("nu", {"set": args.set, "t": t}, check))
    return records


def _cmd_coverage(args):
    pset = _load_set(args)

    def check():
        image = sorted(phi_image(pset, cap=args.cap))
        return (
            "pass",
            {"size": len(pset), "image": image, "full": len(image) == pset.field.q},
        )

    return [_run_check("coverage", {"set": args.set}, check)]


def _cmd_threshold(args):
    field = _field_from_args(args)

    def check():
        report = threshold_experiment(field, args.d, args.sizes, args.samples, args.seed, cap=args.cap)
        return ("pass", {"report": report})

    inputs = {
        "q": field.designation(),
        "d": args.d,
        "sizes": args.sizes,
        "samples": args.samples,
        "seed": args.seed,
    }
    return [_run_check("threshold", inputs, check)]


def _cmd_nu_cross(args):
    field = _field_from_args(args)
    return run_suite(
        "nu-cross",
        {
            "q": field.designation(),
            "d": args.d,
            "sizes": args.sizes,
            "samples": args.samples,
            "seed": args.seed,
            "cap": args.cap,
        },
    )


def _cmd_coverage_d4(args):
    field = _field_from_args(args)
    return run_suite(
        "theorem-1.2",
        {"q": field.designation(), "samples": args.samples, "seed": args.seed, "cap": args.cap},
    )


def _cmd_bounds(args):
    field = _field_from_args(args)
    return run_suite(
        "theorem-1.3-bounds",
        {
            "q": field.designation(),
            "d": args.d,
            "sizes": args.sizes,
            "samples": args.samples,
            "seed": args.seed,
            "cap": args.cap,
        },
    )


def _cmd_sharpness(args):
    field = _field_from_args(args)
    if not args.verify:

        def check():
            sharp = sharpness_set(field, args.d, args.cap)
            results = {
                "case": sharp.case,
                "size_claim": sharp.size_claim,
                "expected_size": sharp.expected_size,
                "actual_size": len(sharp.points),
                "basis": [list(v) for v in sharp.subspace.basis],
            }
            return ("pass" if len(sharp.points) == sharp.expected_size else "fail", results)

        return [_run_check("sharpness", {"q": field.designation(), "d": args.d}, check)]
    return run_suite("sharpness", {"pairs": [(args.d, field.designation())], "cap": args.cap})


def _cmd_isotropic(args):
    field = _field_from_args(args)
    if args.brute:
        return run_suite("isotropic", {"pairs": [(args.n, field.designation())], "cap": args.cap})

    def check():
        basis = max_isotropic_construct(field, args.n)
        results = {
            "constructed_dim": basis.dim,
            "classified_dim": max_isotropic_dim(field, args.n),
            "basis": [list(v) for v in basis.basis],
            "gram_zero": basis.is_null_certified(),
        }
        ok = results["gram_zero"] and basis.dim == results["classified_dim"]
        return ("pass" if ok else "fail", results)

    return [_run_check("isotropic", {"q": field.designation(), "n": args.n}, check)]


def _cmd_suite(args):
    batteries = args.battery or list(BATTERIES)
    records = []
    for name in batteries:
        cfg = dict(_SUITE_DEFAULTS.get(name, {}))
        cfg["cap"] = args.cap
        if name in ("nu-cross", "theorem-1.2", "theorem-1.3-bounds", "sharpness"):
            cfg["seed"] = args.seed
        try:
            records.extend(run_suite(name, cfg))
        except (ValueError, ArithmeticError, CapExceededError) as exc:
            records.append(
                {"command": name, "inputs": cfg, "error": str(exc), "verdict": "error", "wall_time_s": 0.0}
            )
    return records


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ratiodist",
        description="Exact verification of norm-ratio point configurations over small finite fields.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, *, q=False, p=False, d=False, n=False, t=False, sizes=False, samples=None, seed=False, setfile=False):
        sp.add_argument("--out", help="write JSON-lines records to this path instead of stdout")
        sp.add_argument("--cap", type=int, default=None, help="enumeration cap (points)")
        if q:
            sp.add_argument("--q", help="field designation: a prime, or p^ell such as 3^2")
        if p:
            sp.add_argument("--p", type=int, help="characteristic (alternative to --q)")
            sp.add_argument("--ell", type=int, default=1, help="extension degree")
        if d:
            sp.add_argument("--d", type=int, required=True, help="ambient (even) dimension")
        if n:
            sp.add_argument("--n", type=int, required=True, help="half-space dimension")
        if t:
            sp.add_argument("--t", type=int, default=None, help="ratio level (default: all)")
        if sizes:
            sp.add_argument("--sizes", type=_parse_sizes, required=True, help="comma-separated set sizes")
        if samples is not None:
            sp.add_argument("--samples", type=int, default=samples, help="number of random sets")
        if seed:
            sp.add_argument("--seed", type=int, required=True, help="seed (mandatory for randomized runs)")
        if setfile:
            sp.add_argument("--set", required=True, help="point-set file path")

    sp = sub.add_parser("gauss", help="character-sum identity battery")
    common(sp)
    sp.add_argument("--qmax", type=int, default=49)
    sp.set_defaults(func=_cmd_gauss)

    sp = sub.add_parser("sphere-ft", help="zero-sphere transform against closed forms")
    common(sp, q=True, p=True, n=True)
    sp.set_defaults(func=_cmd_sphere_ft)

    sp = sub.add_parser("rt-ft", help="ratio-sphere transform against the closed form")
    common(sp, q=True, p=True, d=True)
    sp.set_defaults(func=_cmd_rt_ft)

    sp = sub.add_parser("nu", help="pair counts of a stored set, brute and spectral")
    common(sp, q=True, d=False, t=True, setfile=True)
    sp.add_argument("--d", type=int, default=None, help="expected dimension (validated)")
    sp.add_argument("--method", choices=("both", "brute", "fourier"), default="both")
    sp.set_defaults(func=_cmd_nu)

    sp = sub.add_parser("coverage", help="attained ratio values of a stored set")
    common(sp, q=True, setfile=True)
    sp.set_defaults(func=_cmd_coverage)

    sp = sub.add_parser("threshold", help="coverage statistics of seeded random sets")
    common(sp, q=True, p=True, d=True, sizes=True, samples=100, seed=True)
    sp.set_defaults(func=_cmd_threshold)

    sp = sub.add_parser("nu-cross", help="brute vs spectral counts on seeded random sets")
    common(sp, q=True, p=True, d=True, sizes=True, samples=5, seed=True)
    sp.set_defaults(func=_cmd_nu_cross)

    sp = sub.add_parser("theorem-1.2", help="dimension-4 coverage threshold battery")
    common(sp, q=True, p=True, samples=100, seed=True)
    sp.set_defaults(func=_cmd_coverage_d4)

    sp = sub.add_parser("theorem-1.3-bounds", help="general-dimension bound battery")
    common(sp, q=True, p=True, d=True, sizes=True, samples=2, seed=True)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("sharpness", help="construct a threshold-sharp product set")
    common(sp, q=True, p=True, d=True)
    sp.add_argument("--verify", action="store_true", help="also verify the {0} image claim")
    sp.set_defaults(func=_cmd_sharpness)

    sp = sub.add_parser("isotropic", help="maximal null subspace construction")
    common(sp, q=True, p=True, n=True)
    sp.add_argument("--brute", action="store_true", help="also run the exhaustive search")
    sp.set_defaults(func=_cmd_isotropic)

    sp = sub.add_parser("suite", help="run the default battery list end to end")
    common(sp, seed=True)
    sp.add_argument("--battery", action="append", choices=sorted(BATTERIES), help="restrict to named batteries")
    sp.set_defaults(func=_cmd_suite)

    return parser


def _exit_code(records):
    worst = 0
    for rec in records:
        v = rec.get("verdict")
        if v == "error":
            worst = max(worst, 2)
        elif v == "fail":
            worst = max(worst, 1)
    return worst


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records = args.func(args)
    except (ValueError, ArithmeticError, CapExceededError, OSError) as exc:
        records = [
            {
                "command": args.subcommand,
                "inputs": {},
                "error": str(exc),
                "verdict": "error",
                "wall_time_s": 0.0,
            }
        ]
    stream = open(args.out, "w") if args.out else sys.stdout
    try:
        for rec in records:
            stream.write(json.dumps(rec) + "\n")
    finally:
        if args.out:
            stream.close()
    return _exit_code(records)


if __name__ == "__main__":
    sys.exit(main())
