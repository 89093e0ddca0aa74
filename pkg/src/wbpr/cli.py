"""Command line front end.

Subcommands build factored specs, apply the modulus-preserving moves,
run the Riesz-pair and coupled-constraint experiments and verify pairs
of specs against each other.  Machine output goes to JSON/CSV files
(written atomically); a short human summary goes to standard output.

Exit codes: 0 when every requested check passes, 1 when a verification
fails (the failing check is named on stdout), 2 on unreadable or
invalid input.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .coupled import (
    DerivationKind,
    ReferencePoint,
    SegmentSpec,
    check_derivation_dichotomy,
    conclude_uniqueness,
    reference_solutions,
    rotation_orbit_witness,
)
from .errors import BudgetExceeded, SpecFormatError
from .hardy import (
    AtomicMeasure,
    boundary_grid,
    factorize_polynomial,
    odd_part,
)
from .harness import Grid1D, VerificationReport, check_lemma_conditions, compare_modulus
from .riesz import (
    RieszSpec,
    default_alpha,
    display_alpha,
    pauli_partner,
    riesz_coefficients,
    verify_pauli_pair,
)
from .serialize import (
    load_json,
    load_spec,
    report_to_dict,
    request_from_dict,
    save_json,
    save_spec,
    spec_to_dict,
    write_csv,
)
from .solutions import (
    FlipSelection,
    OddSingularPerturbation,
    OuterModifier,
    build_solution,
    enumerate_solutions,
    flip_zeros,
    modify_outer,
    perturb_singular,
    strip_solutions,
)
from .strip import StripFunction, lower

GRID_ENV = "WBPR_GRID_DEFAULT"


class CliError(Exception):
    """Invalid input reported with exit status 2."""


def _parse_grid_text(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise CliError(f"grid {text!r} is not of the form start:stop:count")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise CliError(f"grid {text!r}: {exc}") from None
    return a, b, n


def _grid_from_flags(text: str | None, kind: str, theta: float = 0.0,
                     anchor: float = 0.0) -> Grid1D:
    if text is None:
        text = os.environ.get(GRID_ENV) if kind == "real_line" else None
    if text is None:
        if kind == "real_line":
            return Grid1D.default_real()
        if kind == "disc_diameter":
            return Grid1D.default_diameter()
        raise CliError("segment grids need an explicit --grid start:stop:count")
    a, b, n = _parse_grid_text(text)
    try:
        return Grid1D(a, b, n, kind, theta, anchor)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _default_grid_for(spec) -> Grid1D:
    if isinstance(spec, StripFunction):
        return _grid_from_flags(None, "real_line")
    return Grid1D.default_diameter()


def _load(path: str):
    try:
        return load_spec(path)
    except (OSError, SpecFormatError, ValueError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _linspace_text(text: str) -> np.ndarray:
    a, b, n = _parse_grid_text(text)
    if n < 2:
        raise CliError("grids need at least two points")
    return np.linspace(a, b, n)


def _parse_complex(token: str) -> complex:
    try:
        return complex(token.replace(" ", ""))
    except ValueError:
        raise CliError(f"{token!r} is not a complex number") from None


def _print_report(report: VerificationReport) -> None:
    for line in report.lines():
        print(line)


def _finish(report: VerificationReport) -> int:
    _print_report(report)
    if report.passed:
        print("all checks passed")
        return 0
    failing = ", ".join(c.name for c in report.checks if not c.passed)
    print(f"FAILED: {failing}")
    return 1


def _figure_path(out: str) -> str:
    stem, _ = os.path.splitext(out)
    return stem + ".png"


# ---------------------------------------------------------------- factorize


def cmd_factorize(args) -> int:
    coeffs = [_parse_complex(t) for t in args.coeffs.split(",") if t.strip()]
    if len(coeffs) < 2:
        raise CliError("need at least two coefficients (degree >= 1)")
    try:
        spec = factorize_polynomial(coeffs, grid_size=args.grid_size)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    out_spec = lower(spec, scale=args.scale) if args.strip else spec
    save_spec(args.out, out_spec)
    kind = "strip" if args.strip else "disc"
    print(f"wrote {kind} spec with {spec.zeros.count} zeros to {args.out}")
    return 0


# ------------------------------------------------------- flip/perturb/outer


def _parse_selection(tokens: list[str], zeros) -> FlipSelection:
    if tokens == ["all"]:
        return FlipSelection.keep_all(zeros)
    if tokens == ["none"]:
        return FlipSelection.keep_none()
    kept: list[tuple[int, int | None]] = []
    for tok in tokens:
        try:
            if ":" in tok:
                i, k = tok.split(":")
                kept.append((int(i), int(k)))
            else:
                kept.append((int(tok), None))
        except ValueError:
            raise CliError(
                f"selection token {tok!r}; use INDEX, INDEX:COUNT, all or none"
            ) from None
    try:
        return FlipSelection(tuple(kept))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_flip(args) -> int:
    spec = _load(args.f)
    disc = spec.disc if isinstance(spec, StripFunction) else spec
    sel = _parse_selection(args.select, disc.zeros)
    try:
        if isinstance(spec, StripFunction):
            out = strip_solutions(spec, sel=sel)
        else:
            out = flip_zeros(spec, sel)
    except (ValueError, IndexError) as exc:
        raise CliError(str(exc)) from None
    save_spec(args.out, out)
    print(f"kept {sel.kept or 'nothing'}; wrote {args.out}")
    return 0


def _parse_atoms(tokens: list[str]) -> AtomicMeasure:
    pairs = []
    for tok in tokens:
        try:
            theta, mass = tok.split(":")
            pairs.append((float(theta), float(mass)))
        except ValueError:
            raise CliError(f"atom token {tok!r}; use THETA:MASS") from None
    try:
        return AtomicMeasure(tuple(pairs))
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_perturb(args) -> int:
    spec = _load(args.f)
    try:
        pert = OddSingularPerturbation(_parse_atoms(args.atom))
        if isinstance(spec, StripFunction):
            out = strip_solutions(spec, perturbation=pert)
        else:
            out = perturb_singular(spec, pert)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    save_spec(args.out, out)
    print(f"moved {pert.sigma_plus.total_mass} of singular mass; wrote {args.out}")
    return 0


def _build_modifier(args, grid_size: int) -> OuterModifier:
    if args.kind == "star_quotient":
        return OuterModifier.star_quotient()
    if args.kind == "exponential":
        if args.eta is None:
            raise CliError("the exponential modifier needs --eta")
        return OuterModifier.exponential(args.eta)
    samples = np.zeros(grid_size)
    theta = boundary_grid(grid_size)
    if args.samples_file is not None:
        try:
            raw = np.loadtxt(args.samples_file, delimiter=",", skiprows=args.skip_rows)
        except (OSError, ValueError) as exc:
            raise CliError(f"{args.samples_file}: {exc}") from None
        raw = np.atleast_1d(np.asarray(raw, float))
        if raw.ndim != 1 or raw.size != grid_size:
            raise CliError(
                f"{args.samples_file}: expected {grid_size} values, got shape {raw.shape}")
        samples = samples + raw
    for tok in args.sin:
        try:
            k, amp = tok.split(":")
            samples = samples + float(amp) * np.sin(int(k) * theta)
        except ValueError:
            raise CliError(f"--sin token {tok!r}; use HARMONIC:AMPLITUDE") from None
    if args.samples_file is None and not args.sin:
        raise CliError("odd_boundary needs --samples-file or --sin")
    try:
        return OuterModifier.odd_boundary(odd_part(samples) if args.force_odd
                                          else samples)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def cmd_outer(args) -> int:
    spec = _load(args.f)
    disc = spec.disc if isinstance(spec, StripFunction) else spec
    mod = _build_modifier(args, disc.outer.grid_size)
    try:
        if isinstance(spec, StripFunction):
            out = strip_solutions(spec, modifier=mod)
        else:
            out = modify_outer(spec, mod)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    save_spec(args.out, out)
    print(f"applied {mod.kind} modifier; wrote {args.out}")
    return 0


# ---------------------------------------------------------------- enumerate


def cmd_enumerate(args) -> int:
    spec = _load(args.f)
    if not isinstance(spec, StripFunction):
        spec = StripFunction(spec)
    grid = _grid_from_flags(args.grid, "real_line")
    rng = np.random.default_rng(args.seed)
    try:
        sols = enumerate_solutions(spec, flip_cap=args.flip_cap,
                                   verify=not args.no_verify,
                                   verify_grid=grid, budget=args.budget, rng=rng)
    except (BudgetExceeded, ValueError) as exc:
        raise CliError(str(exc)) from None
    except RuntimeError as exc:
        print(f"FAILED: {exc}")
        return 1
    os.makedirs(args.out_dir, exist_ok=True)
    max_errs = []
    entries = []
    for g in sols[:args.max_write]:
        dev = compare_modulus(spec, g, grid, tol=args.tol)
        max_errs.append(dev.checks[0].max_err)
        entries.append({"spec": spec_to_dict(g), "report": report_to_dict(dev)})
    save_json(os.path.join(args.out_dir, "solutions.json"), entries)
    summary = {
        "count": len(sols),
        "written": len(entries),
        "array": "solutions.json",
        "max_relative_deviation": max(max_errs) if max_errs else 0.0,
        "tol": args.tol,
    }
    report_path = os.path.join(args.out_dir, "enumerate_report.json")
    save_json(report_path, summary)
    write_csv(os.path.join(args.out_dir, "enumerate_deviation.csv"),
              ["index", "max_relative_deviation"],
              [np.arange(len(max_errs)), np.array(max_errs)])
    if not args.no_plots:
        from . import figures
        figures.solutions_figure(os.path.join(args.out_dir, "enumerate.png"),
                                 max_errs, args.tol,
                                 title=f"{len(sols)} companions")
    print(f"enumerated {len(sols)} companions; wrote {len(entries)} specs to {args.out_dir}")
    worst = summary["max_relative_deviation"]
    print(f"worst modulus deviation {worst:.3e} (tol {args.tol:.1e})")
    if worst > args.tol:
        print("FAILED: modulus")
        return 1
    return 0


# -------------------------------------------------------------------- pauli


def _parse_signs(text: str, depth: int) -> tuple[int, ...]:
    text = text.strip()
    if "," in text:
        try:
            signs = tuple(int(t) for t in text.split(","))
        except ValueError:
            raise CliError(f"signs {text!r}") from None
    else:
        table = {"+": 1, "-": -1}
        try:
            signs = tuple(table[ch] for ch in text)
        except KeyError:
            raise CliError(f"signs {text!r}; use e.g. ++- or 1,1,-1") from None
    if len(signs) != depth:
        raise CliError(f"{len(signs)} signs for depth {depth}")
    return signs


def _parse_alphas(text: str, depth: int) -> tuple[float, ...]:
    if text == "display":
        return display_alpha(depth)
    if text == "default":
        return default_alpha(depth)
    try:
        alphas = tuple(float(t) for t in text.split(","))
    except ValueError:
        raise CliError(f"alpha {text!r}; use display, default or a float list") from None
    if len(alphas) != depth:
        raise CliError(f"{len(alphas)} amplitudes for depth {depth}")
    return alphas


def cmd_pauli(args) -> int:
    alphas = _parse_alphas(args.alpha, args.depth)
    try:
        first = RieszSpec(alphas, _parse_signs(args.signs, args.depth)
                          if args.signs else (1,) * args.depth)
        second = RieszSpec(alphas, _parse_signs(args.ref_signs, args.depth)
                           if args.ref_signs else (1,) * args.depth)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    xgrid = _linspace_text(args.xgrid) if args.xgrid else np.linspace(0.0, 1.0, 64)
    xigrid = (_linspace_text(args.xigrid) if args.xigrid
              else np.linspace(-30.0, 30.0, 241))
    report = verify_pauli_pair(first, second, xgrid=xgrid, xigrid=xigrid,
                               ratio_tol=args.ratio_tol)

    os.makedirs(args.out_dir, exist_ok=True)
    fa = pauli_partner(first)
    fb = pauli_partner(second)
    ta, tb = fa.time(xgrid), fb.time(xgrid)
    sa, sb = fa.freq(xigrid), fb.freq(xigrid)
    write_csv(os.path.join(args.out_dir, "pauli_time.csv"),
              ["x", "abs_first", "abs_second", "absdiff"],
              [xgrid, np.abs(ta), np.abs(tb), np.abs(np.abs(tb) - np.abs(ta))])
    write_csv(os.path.join(args.out_dir, "pauli_freq.csv"),
              ["xi", "abs_first", "abs_second", "absdiff"],
              [xigrid, np.abs(sa), np.abs(sb), np.abs(np.abs(sb) - np.abs(sa))])
    table = riesz_coefficients(first)
    ks = sorted(table.entries)
    write_csv(os.path.join(args.out_dir, "pauli_coefficients.csv"),
              ["k", "re", "im", "abs"],
              [np.array(ks, float),
               np.array([table[k].real for k in ks]),
               np.array([table[k].imag for k in ks]),
               np.array([abs(table[k]) for k in ks])])
    save_json(os.path.join(args.out_dir, "pauli_report.json"),
              report_to_dict(report))
    if not args.no_plots:
        from . import figures
        figures.pauli_figure(os.path.join(args.out_dir, "pauli.png"),
                             xgrid, ta, tb, xigrid, sa, sb,
                             pattern="".join("+" if s > 0 else "-"
                                             for s in first.signs))
    print(f"wrote pauli_time.csv / pauli_freq.csv / pauli_coefficients.csv "
          f"/ pauli_report.json to {args.out_dir}")
    return _finish(report)


# ------------------------------------------------------------------- couple


def _read_pairs(path: str) -> list[ReferencePoint]:
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise CliError(f"{path}: {exc}") from None
    points = []
    for i, row in enumerate(rows):
        cells = [c.strip() for c in row.split(",")]
        if i == 0 and cells and not _is_float(cells[0]):
            continue
        if len(cells) != 4:
            raise CliError(f"{path} line {i + 1}: need fx_re,fx_im,hx_re,hx_im")
        try:
            a, b, c, d = (float(v) for v in cells)
        except ValueError as exc:
            raise CliError(f"{path} line {i + 1}: {exc}") from None
        points.append(ReferencePoint(complex(a, b), complex(c, d)))
    if not points:
        raise CliError(f"{path}: no data rows")
    return points


def _is_float(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def _circle_residual(p: ReferencePoint, g: complex) -> float:
    r1 = abs(abs(g) - abs(p.fx))
    r2 = abs(abs(g - p.hx) - abs(p.fx - p.hx))
    return max(r1, r2)


def cmd_couple_reference(args) -> int:
    points = _read_pairs(args.pairs)
    rows = {k: [] for k in ("fx_re", "fx_im", "hx_re", "hx_im",
                            "g1_re", "g1_im", "g2_re", "g2_im",
                            "residual_1", "residual_2")}
    worst = 0.0
    for i, p in enumerate(points):
        try:
            g1, g2 = reference_solutions(p)
        except ValueError as exc:
            raise CliError(f"{args.pairs} row {i + 1}: {exc}") from None
        r1, r2 = _circle_residual(p, g1), _circle_residual(p, g2)
        worst = max(worst, r1, r2)
        for key, val in (("fx_re", p.fx.real), ("fx_im", p.fx.imag),
                         ("hx_re", p.hx.real), ("hx_im", p.hx.imag),
                         ("g1_re", g1.real), ("g1_im", g1.imag),
                         ("g2_re", g2.real), ("g2_im", g2.imag),
                         ("residual_1", r1), ("residual_2", r2)):
            rows[key].append(val)
    write_csv(args.out, list(rows), [np.array(v) for v in rows.values()])
    stem, _ = os.path.splitext(args.out)
    save_json(stem + "_report.json", {
        "pairs": len(points),
        "max_circle_residual": worst,
        "tol": args.tol,
        "passed": worst <= args.tol,
    })
    if not args.no_plots:
        from . import figures
        residuals = [max(a, b) for a, b in zip(rows["residual_1"], rows["residual_2"])]
        figures.solutions_figure(_figure_path(args.out), residuals, args.tol,
                                 title=f"{len(points)} reference pairs")
    print(f"solved {len(points)} pairs; worst circle residual {worst:.3e} "
          f"(tol {args.tol:.1e}); wrote {args.out}")
    if worst > args.tol:
        print("FAILED: circle_residual")
        return 1
    print("all checks passed")
    return 0


def _derivation_from_flags(args) -> DerivationKind:
    kind, _, param = args.kind.partition(":")
    try:
        if kind in ("d", "derivative"):
            return DerivationKind.derivative()
        if kind in ("delta", "shift"):
            b = float(param) if param else args.b
            if b is None:
                raise CliError("shift needs --b or delta:B")
            return DerivationKind.shift(b)
        if kind in ("gamma", "dilation"):
            q = float(param) if param else args.q
            if q is None:
                raise CliError("dilation needs --q or gamma:Q")
            return DerivationKind.dilation(q)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    raise CliError(f"unknown derivation kind {args.kind!r}")


def cmd_couple_derivation(args) -> int:
    f = _load(args.f)
    g = _load(args.g)
    kind = _derivation_from_flags(args)
    gkind = "real_line" if isinstance(f, StripFunction) else "disc_diameter"
    grid = _grid_from_flags(args.grid, gkind)
    try:
        result = check_derivation_dichotomy(f, g, kind, grid=grid)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    print(f"branch: {result.branch}")
    if result.beta is not None:
        print(f"beta: {result.beta} (treated as real: {result.beta_is_real})")
    if args.out:
        payload = report_to_dict(result.report)
        payload["branch"] = result.branch
        if result.beta is not None:
            payload["beta"] = [result.beta.real, result.beta.imag]
        save_json(args.out, payload)
        if not args.no_plots:
            from . import figures
            figures.report_figure(_figure_path(args.out), result.report,
                                  title=f"derivation dichotomy: {result.branch}")
        print(f"wrote {args.out}")
    return _finish(result.report)


def cmd_couple_segment(args) -> int:
    f = _load(args.f)
    g = _load(args.g)
    try:
        seg = SegmentSpec(theta=args.theta, anchor=_parse_complex(args.anchor),
                          half_length=args.half_length, samples=args.samples)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    gkind = "real_line" if isinstance(f, StripFunction) else "disc_diameter"
    grid = _grid_from_flags(args.grid, gkind)
    try:
        result = conclude_uniqueness(f, g, seg, grid=grid)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    print(f"status: {result.status}")
    if result.constant is not None:
        print(f"constant: {result.constant}")
    payload = report_to_dict(result.report)
    payload["status"] = result.status
    if result.constant is not None:
        payload["constant"] = [result.constant.real, result.constant.imag]
    if isinstance(f, StripFunction) and isinstance(g, StripFunction):
        witness = rotation_orbit_witness(f.disc.zeros, g.disc.zeros, args.theta)
        payload["orbit_witness"] = {
            "verdict": witness.verdict,
            "symmetric_difference": [[z.real, z.imag] for z in witness.difference],
        }
        print(f"orbit witness: {witness.verdict}")
    if args.out:
        save_json(args.out, payload)
        if not args.no_plots:
            from . import figures
            figures.report_figure(_figure_path(args.out), result.report,
                                  title=f"segment uniqueness: {result.status}")
        print(f"wrote {args.out}")
    return _finish(result.report)


# ------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    f = _load(args.f)
    if args.request:
        if args.g:
            raise CliError("give either --g or --request, not both")
        if not isinstance(f, StripFunction):
            raise CliError("--request needs a strip spec for --f")
        try:
            g = build_solution(f, request_from_dict(load_json(args.request)))
        except (OSError, ValueError) as exc:
            raise CliError(str(exc)) from None
        if args.emit:
            save_spec(args.emit, g)
            print(f"wrote {args.emit}")
    elif args.g:
        g = _load(args.g)
    else:
        raise CliError("verify needs --g or --request")
    if args.grid_kind:
        kind = args.grid_kind
    else:
        kind = "real_line" if isinstance(f, StripFunction) else "disc_diameter"
    grid = _grid_from_flags(args.grid, kind)
    report = VerificationReport()
    if args.checks in ("both", "modulus"):
        part = compare_modulus(f, g, grid, tol=args.tol)
        report.checks.extend(part.checks)
        report.metadata.update(part.metadata)
    fd = f.disc if isinstance(f, StripFunction) else f
    gd = g.disc if isinstance(g, StripFunction) else g
    if args.checks in ("both", "conditions"):
        if fd.outer.grid_size == gd.outer.grid_size:
            cond = check_lemma_conditions(fd, gd)
            report.checks.extend(cond.checks)
            report.metadata.update(cond.metadata)
        elif args.checks == "conditions":
            raise CliError("condition checks need matching outer grid sizes")

    csv_path = args.csv
    if args.out and not csv_path:
        csv_path = os.path.splitext(args.out)[0] + "_points.csv"
    if csv_path:
        x = grid.points()
        mf = np.abs(np.asarray(f(x)))
        mg = np.abs(np.asarray(g(x)))
        from .harness import modulus_deviation
        t = np.linspace(grid.start, grid.stop, grid.count)
        write_csv(csv_path, ["t", "abs_f", "abs_g", "relative_deviation"],
                  [t, mf, mg, modulus_deviation(mf, mg)])
        if not args.no_plots:
            from . import figures
            figures.modulus_figure(_figure_path(csv_path), t, mf, mg,
                                   ("|f|", "|g|"))
    if args.out:
        save_json(args.out, report_to_dict(report))
        if not args.no_plots:
            from . import figures
            figures.report_figure(os.path.splitext(args.out)[0] + "_checks.png",
                                  report)
        print(f"wrote {args.out}")
    return _finish(report)


# ------------------------------------------------------------------- export


def cmd_export(args) -> int:
    f = _load(args.f)
    if args.grid_kind:
        kind = args.grid_kind
    else:
        kind = "real_line" if isinstance(f, StripFunction) else "disc_diameter"
    grid = _grid_from_flags(args.grid, kind)
    t = np.linspace(grid.start, grid.stop, grid.count)
    try:
        values = np.asarray(f(grid.points()))
    except Exception as exc:
        raise CliError(f"evaluation failed: {exc}") from None
    write_csv(args.out, ["t", "re", "im", "abs"],
              [t, values.real, values.imag, np.abs(values)])
    if not args.no_plots:
        from . import figures
        figures.modulus_figure(_figure_path(args.out), t,
                               np.abs(values), np.abs(values), ("|f|", "|f|"))
    print(f"wrote {grid.count} samples to {args.out}")
    return 0


# -------------------------------------------------------------------- main


def _add_plot_flags(p) -> None:
    p.add_argument("--no-plots", action="store_true",
                   help="skip the figure files that accompany data output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wbpr",
        description="factored Hardy-space models with modulus-preserving moves")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="factor a polynomial into a spec")
    p.add_argument("--coeffs", required=True,
                   help="comma separated coefficients, constant term first")
    p.add_argument("--grid-size", type=int, default=4096)
    p.add_argument("--strip", action="store_true",
                   help="emit a strip spec instead of a disc spec")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("flip", help="conjugate all zeros outside a kept set")
    p.add_argument("--f", required=True)
    p.add_argument("--select", nargs="+", required=True, metavar="SEL",
                   help="entries to keep: indices, INDEX:COUNT, all or none")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_flip)

    p = sub.add_parser("perturb", help="move singular mass to mirror atoms")
    p.add_argument("--f", required=True)
    p.add_argument("--atom", action="append", required=True, metavar="THETA:MASS",
                   help="atom of sigma_plus; repeatable")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("outer", help="multiply by an odd-log-modulus outer factor")
    p.add_argument("--f", required=True)
    p.add_argument("--kind", choices=("odd_boundary", "star_quotient", "exponential"),
                   default="odd_boundary")
    p.add_argument("--samples-file", help="CSV with one log-modulus value per grid angle")
    p.add_argument("--skip-rows", type=int, default=0)
    p.add_argument("--sin", action="append", default=[], metavar="HARMONIC:AMPLITUDE",
                   help="add AMPLITUDE*sin(HARMONIC*theta); repeatable")
    p.add_argument("--force-odd", action="store_true",
                   help="project the samples onto their odd part first")
    p.add_argument("--eta", type=float, help="twist rate for --kind exponential")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_outer)

    p = sub.add_parser("enumerate", help="enumerate companions of a spec")
    p.add_argument("--f", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--flip-cap", type=int, default=4096)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--max-write", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--grid", metavar="A:B:N")
    p.add_argument("--no-verify", action="store_true")
    _add_plot_flags(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("pauli", help="build and verify a same-modulus sign pair")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--signs", help="sign pattern, e.g. ++- or 1,1,-1")
    p.add_argument("--ref-signs", help="comparison pattern; default all plus")
    p.add_argument("--alpha", default="display",
                   help="display, default, or comma separated amplitudes")
    p.add_argument("--xgrid", metavar="A:B:N")
    p.add_argument("--xigrid", metavar="A:B:N")
    p.add_argument("--ratio-tol", type=float, default=1e-6)
    p.add_argument("--out-dir", default="pauli_out")
    _add_plot_flags(p)
    p.set_defaults(func=cmd_pauli)

    p = sub.add_parser("couple", help="pointwise coupled-constraint experiments")
    csub = p.add_subparsers(dest="couple_command", required=True)

    c = csub.add_parser("reference", help="two-circle solutions from (fx, hx) pairs")
    c.add_argument("--pairs", required=True, help="CSV fx_re,fx_im,hx_re,hx_im")
    c.add_argument("--out", required=True)
    c.add_argument("--tol", type=float, default=1e-12)
    _add_plot_flags(c)
    c.set_defaults(func=cmd_couple_reference)

    c = csub.add_parser("derivation", help="classify g against f under a derivation")
    c.add_argument("--f", required=True)
    c.add_argument("--g", required=True)
    c.add_argument("--kind", default="derivative",
                   help="d | delta:B | gamma:Q (or derivative/shift/dilation)")
    c.add_argument("--b", type=float, help="shift step")
    c.add_argument("--q", type=float, help="dilation factor, 0 < |q| < 1")
    c.add_argument("--grid", metavar="A:B:N")
    c.add_argument("--out")
    _add_plot_flags(c)
    c.set_defaults(func=cmd_couple_derivation)

    c = csub.add_parser("segment", help="line plus off-axis segment uniqueness")
    c.add_argument("--f", required=True)
    c.add_argument("--g", required=True)
    c.add_argument("--theta", type=float, required=True)
    c.add_argument("--a", "--anchor", dest="anchor", default="0",
                   help="intersection point with the real axis")
    c.add_argument("--len", "--half-length", dest="half_length",
                   type=float, default=1.0)
    c.add_argument("--samples", type=int, default=129)
    c.add_argument("--grid", metavar="A:B:N")
    c.add_argument("--out")
    _add_plot_flags(c)
    c.set_defaults(func=cmd_couple_segment)

    p = sub.add_parser("verify", help="compare two specs on a grid")
    p.add_argument("--f", required=True)
    p.add_argument("--g", help="spec to compare against")
    p.add_argument("--request",
                   help="build the comparison spec from a solution request "
                        "JSON instead of --g (strip specs only)")
    p.add_argument("--emit", help="write the spec built from --request here")
    p.add_argument("--grid", metavar="A:B:N")
    p.add_argument("--grid-kind", choices=("real_line", "disc_diameter"))
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--checks", choices=("modulus", "conditions", "both"),
                   default="both")
    p.add_argument("--csv", help="dump per-point modulus columns to this file")
    p.add_argument("--out")
    _add_plot_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="sample a spec to CSV")
    p.add_argument("--f", required=True)
    p.add_argument("--grid", metavar="A:B:N")
    p.add_argument("--grid-kind", choices=("real_line", "disc_diameter"))
    p.add_argument("--out", required=True)
    _add_plot_flags(p)
    p.set_defaults(func=cmd_export)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
