#!/usr/bin/env python3
"""
acr-scan - Local ACR and Zero Sensitivity Scanner

Reads reaction networks (.crn) or raw coefficient/exponent matrices (.mat)
and decides, for every species, whether the family of steady-state systems
has local Absolute Concentration Robustness, without solving for steady
states.

Usage:
    acr-scan scan <paths...> [--format json|text] [--seed N] [--samples N]
    acr-scan scan --example idhkp-idh
    acr-scan sensitivity <file> --points <file> [--species NAME]
    acr-scan polynomialize <file>
    acr-scan explain <file> [--species NAME]
    acr-scan list-examples

Exit codes:
    0   success
    1   parse or build error (or every sensitivity point rejected)
    2   internal error
"""

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple, Union

from dataclasses_json import dataclass_json

# Make the package importable when run as a script from the repository root
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from acr import (
    AcrError,
    AnalysisReport,
    BuildError,
    GeneralizedPolynomialSystem,
    ParseError,
    PointReport,
    analyze,
    analyze_point,
    catalog,
    config_manager,
    convex_jacobian,
    excluded_minors,
    extreme_rays,
    get_environment_config,
    get_network,
    load_file,
    parse_points,
    polynomialize,
    symbolic_acr_condition,
)
from acr.exact import format_poly

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INTERNAL_ERROR = 2

logger = logging.getLogger("acr_scan")


@dataclass_json
@dataclass
class FileError:
    """A file that could not be analyzed"""
    path: str
    kind: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None


@dataclass_json
@dataclass
class ScanDocument:
    reports: List[AnalysisReport] = field(default_factory=list)
    errors: List[FileError] = field(default_factory=list)
    schema: int = 1


@dataclass_json
@dataclass
class SensitivityDocument:
    name: str
    points: List[PointReport] = field(default_factory=list)
    schema: int = 1


@dataclass_json
@dataclass
class PolynomializationDocument:
    name: str
    variables: List[str]
    m: List[int]
    beta: List[List[int]]
    equations: List[str]
    polynomial: List[str]
    identity: bool
    schema: int = 1


def _dumps(document) -> str:
    return document.to_json(indent=2, sort_keys=True, ensure_ascii=False)


class AcrScanner:
    """Runs analyses over input files and renders the results"""

    def __init__(self, output_format: str = "text", jobs: int = 1,
                 stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        """
        Initialize the scanner.

        Args:
            output_format: "text" or "json"
            jobs: Worker threads for multi-file scans
            stdout: Stream for results (defaults to sys.stdout)
            stderr: Stream for diagnostics (defaults to sys.stderr)
        """
        self.output_format = output_format
        self.jobs = max(1, jobs)
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.color = get_environment_config()["color"] and self.stdout.isatty()

    # -- output helpers ------------------------------------------------------

    def emit(self, text: str) -> None:
        print(text, file=self.stdout)

    def progress(self, text: str) -> None:
        # JSON goes to stdout alone
        stream = self.stderr if self.output_format == "json" else self.stdout
        print(text, file=stream)

    def problem(self, text: str) -> None:
        print(text, file=self.stderr)

    # -- inputs --------------------------------------------------------------

    def collect_inputs(self, paths: Iterable[Union[str, Path]]) -> List[Path]:
        """Expand directories to their *.crn files (recursively), sorted by path."""
        found = set()
        for raw in paths:
            path = Path(raw)
            if path.is_dir():
                found.update(path.rglob("*.crn"))
            else:
                found.add(path)
        return sorted(found)

    def analyze_path(self, path: Path) -> Tuple[Optional[AnalysisReport], Optional[FileError], int]:
        try:
            document = load_file(path)
            report = analyze(document.system)
            report.source = str(path)
            return report, None, EXIT_OK
        except ParseError as e:
            return None, FileError(str(path), "parse", e.render(), e.line, e.column), EXIT_INPUT_ERROR
        except (AcrError, OSError) as e:
            return None, FileError(str(path), "input", str(e)), EXIT_INPUT_ERROR
        except Exception as e:
            logger.debug("internal error on %s", path, exc_info=True)
            return None, FileError(str(path), "internal", f"{type(e).__name__}: {e}"), \
                EXIT_INTERNAL_ERROR

    # -- commands ------------------------------------------------------------

    def scan(self, paths: Sequence[Union[str, Path]]) -> int:
        """Analyze every input; per-file errors do not stop the scan."""
        inputs = self.collect_inputs(paths)
        if not inputs:
            self.problem("❌ No input files found")
            return EXIT_INPUT_ERROR
        self.progress(f"🔍 Scanning {len(inputs)} file(s)...")

        if self.jobs > 1 and len(inputs) > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(self.analyze_path, inputs))
        else:
            results = [self.analyze_path(path) for path in inputs]

        document = ScanDocument()
        code = EXIT_OK
        for path, (report, error, status) in zip(inputs, results):
            code = max(code, status)
            if report is not None:
                document.reports.append(report)
                if self.output_format == "text":
                    self.emit(f"\n📄 {path}")
                    self.emit(report.pretty_print(color=self.color))
            else:
                document.errors.append(error)
                self.problem(f"❌ {path}: {error.message}")

        if self.output_format == "json":
            self.emit(_dumps(document))
        self.progress(f"✅ {len(document.reports)} analyzed, {len(document.errors)} failed")
        return code

    def sensitivity(self, path: Union[str, Path], points_file: Optional[str] = None,
                    inline_points: Sequence[str] = (), species: Optional[str] = None) -> int:
        """Pointwise sensitivities; fails only when every point is rejected."""
        try:
            document = load_file(path)
            system = document.system
            if system.W is None:
                raise BuildError("sensitivities need a conservation matrix (add a 'W:' block)")
            if system.is_symbolic:
                raise BuildError("sensitivities need a numeric exponent matrix B")
            texts = [Path(points_file).read_text(encoding="utf-8")] if points_file else []
            texts.extend(inline_points)
            points = [p for text in texts for p in parse_points(text, system)]
            names = [system.species[system.species_index(species)]] if species else None
        except ParseError as e:
            self.problem(f"❌ {e.render()}")
            return EXIT_INPUT_ERROR
        except (AcrError, OSError) as e:
            self.problem(f"❌ {path}: {e}")
            return EXIT_INPUT_ERROR
        if not points:
            self.problem("❌ No points given (use --points FILE or --point 'k: ... x: ...')")
            return EXIT_INPUT_ERROR

        result = SensitivityDocument(name=system.name)
        try:
            for point in points:
                result.points.append(analyze_point(system, point.k, point.x, species=names))
        except AcrError as e:
            self.problem(f"❌ {path}: {e}")
            return EXIT_INPUT_ERROR
        except Exception as e:
            self.problem(f"❌ internal error: {type(e).__name__}: {e}")
            return EXIT_INTERNAL_ERROR

        if self.output_format == "json":
            self.emit(_dumps(result))
        else:
            self._print_sensitivities(system.species, result)
        failed = sum(1 for report in result.points if report.error is not None)
        return EXIT_INPUT_ERROR if failed == len(result.points) else EXIT_OK

    def _print_sensitivities(self, species: Sequence[str], result: SensitivityDocument) -> None:
        width = max(len(name) for name in species)
        for number, report in enumerate(result.points, start=1):
            self.emit(f"\n📍 point {number}: k = ({', '.join(report.k)})  x = ({', '.join(report.x)})")
            if not report.admitted:
                self.emit(f"   ❌ rejected: {report.error}")
                continue
            degeneracy = report.degeneracy
            self.emit(f"   residual {report.residual:.3e}; {degeneracy.plain.value}, "
                      f"{degeneracy.wrt_s.value} (rank {degeneracy.rank}, "
                      f"augmented rank {degeneracy.augmented_rank})")
            for note in report.notes:
                self.emit(f"   💡 {note}")
            if report.error is not None:
                self.emit(f"   ⚠️ {report.error}")
                continue
            if report.sensitivities:
                header = "".join(f"{'T' + str(j + 1):>14}" for j in range(len(report.sensitivities)))
                self.emit(f"   {'':<{width}}{header}")
                for i, name in enumerate(species):
                    row = "".join(f"{vec.values[i]:>14.6g}" for vec in report.sensitivities)
                    self.emit(f"   {name:<{width}}{row}")
            for name, zero in report.zero_sensitivity.items():
                mark = "✅ zero sensitivity" if zero else "❌ nonzero sensitivity"
                self.emit(f"   {name:<{width}}  {mark}")

    def polynomialize(self, path: Union[str, Path]) -> int:
        """Print m, beta(i) and the cleared polynomial system."""
        try:
            document = load_file(path)
            g = GeneralizedPolynomialSystem.from_system(document.system, document.rates)
            result = polynomialize(g)
        except ParseError as e:
            self.problem(f"❌ {e.render()}")
            return EXIT_INPUT_ERROR
        except (AcrError, OSError) as e:
            self.problem(f"❌ {path}: {e}")
            return EXIT_INPUT_ERROR

        output = PolynomializationDocument(
            name=document.system.name,
            variables=list(result.gtilde.variables),
            m=list(result.m),
            beta=[list(b) for b in result.beta],
            equations=g.format_equations(),
            polynomial=result.gtilde.format_equations(),
            identity=result.is_identity,
        )
        if self.output_format == "json":
            self.emit(_dumps(output))
            return EXIT_OK
        if result.is_identity:
            self.emit("💡 exponents are already non-negative integers: identity transform")
        self.emit(f"m = ({', '.join(str(v) for v in output.m)})")
        for i, (equation, beta, poly) in enumerate(zip(output.equations, output.beta,
                                                       output.polynomial), start=1):
            self.emit(f"g{i} = {equation}")
            self.emit(f"   beta({i}) = ({', '.join(str(v) for v in beta)})")
            self.emit(f"   g~{i} = {poly}")
        return EXIT_OK

    def explain(self, path: Union[str, Path], species: Optional[str] = None) -> int:
        """Print every intermediate object behind the verdicts."""
        try:
            document = load_file(path)
            system = document.system
            indices = [system.species_index(species)] if species else range(system.n)
            cj = convex_jacobian(system)
            rays = extreme_rays(system.N)
            report = analyze(system)
        except ParseError as e:
            self.problem(f"❌ {e.render()}")
            return EXIT_INPUT_ERROR
        except (AcrError, OSError) as e:
            self.problem(f"❌ {path}: {e}")
            return EXIT_INPUT_ERROR

        self.emit(f"📊 {system.name or path}: species {', '.join(system.species)}")
        if system.gamma is not None:
            self.emit("\nstoichiometric matrix:")
            self.emit(str(system.gamma))
        self.emit(f"\nN (rows {[i + 1 for i in system.selected_rows]}):")
        self.emit(str(system.N))
        self.emit("\nW:")
        self.emit(str(system.W) if system.W is not None else "(not given)")
        self.emit("\nB:")
        self.emit(str(system.B))
        self.emit("\nkernel basis:")
        for name, w in zip(cj.param_names, cj.kernel_basis):
            self.emit(f"   {name}: ({', '.join(str(x) for x in w)})")
        self.emit("\nextreme rays:")
        for ray in rays.to_strings():
            self.emit(f"   {ray}")
        self.emit("\nN diag(v) B^t:")
        self.emit(str(cj.matrix))

        for i in indices:
            self.emit(f"\n🔍 {system.species[i]} (column {i} removed):")
            found = excluded_minors(cj, i)
            if not found:
                self.emit("   no minor avoids this column")
            for minor in found:
                self.emit(f"   columns {list(minor.cols)}: {format_poly(minor.value)}")
            if cj.is_symbolic:
                for condition in symbolic_acr_condition(cj, i):
                    self.emit(f"   condition: {format_poly(condition)} = 0")

        self.emit("")
        self.emit(report.pretty_print(color=self.color))
        if report.divisibility_polynomial is not None:
            self.emit(f"\np_v(h) = {report.divisibility_polynomial}")
        return EXIT_OK

    def list_examples(self) -> int:
        entries = catalog.list_entries()
        self.emit(f"📚 {len(entries)} bundled networks:")
        width = max(len(entry.name) for entry in entries)
        for entry in entries:
            acr = ", ".join(entry.local_acr) if entry.local_acr else "-"
            self.emit(f"   {entry.name:<{width}}  {entry.description}  [local ACR: {acr}]")
        return EXIT_OK


def _resolve_examples(names: Sequence[str]) -> List[Path]:
    return [get_network(name).path for name in names]


def _apply_overrides(args: argparse.Namespace) -> None:
    overrides = {
        "analysis.seed": getattr(args, "seed", None),
        "analysis.samples": getattr(args, "samples", None),
        "tolerances.rank": getattr(args, "rank_tol", None),
        "tolerances.residual": getattr(args, "residual_tol", None),
    }
    for key, value in overrides.items():
        if value is not None:
            config_manager.set_override(key, value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acr-scan",
        description="Decide local ACR and zero sensitivity of power-law reaction networks",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    parser.add_argument("--format", choices=["text", "json"], default="text",
                        help="Output format (default: text)")
    subparsers = parser.add_subparsers(dest="command")

    scan = subparsers.add_parser("scan", help="Analyze network or matrix files")
    scan.add_argument("paths", nargs="*", help="Files or directories (*.crn, recursively)")
    scan.add_argument("--example", action="append", default=[],
                      help="Bundled network by name (repeatable)")
    scan.add_argument("--seed", type=int, help="Seed for the sampling stage (default 0)")
    scan.add_argument("--samples", type=int, help="Sample count for the sampling stage (default 64)")
    scan.add_argument("--jobs", "-j", type=int, default=1, help="Files analyzed in parallel")

    sens = subparsers.add_parser("sensitivity", help="Sensitivities at given steady states")
    sens.add_argument("path", help="Network or matrix file (needs W)")
    sens.add_argument("--points", help="Points file: lines 'k: <rates> x: <concentrations>'")
    sens.add_argument("--point", action="append", default=[], help="Inline point 'k: ... x: ...'")
    sens.add_argument("--species", help="Only report this species")
    sens.add_argument("--rank-tol", type=float, help="Relative rank threshold (default 1e-9)")
    sens.add_argument("--residual-tol", type=float, help="Steady-state admission tolerance")

    poly = subparsers.add_parser("polynomialize", help="Clear rational exponents")
    poly.add_argument("path", help="Network or matrix file")

    explain = subparsers.add_parser("explain", help="Show the full evidence chain")
    explain.add_argument("path", help="Network or matrix file")
    explain.add_argument("--species", help="Only explain this species")

    subparsers.add_parser("list-examples", help="List bundled networks")

    for sub in (scan, sens, poly, explain):
        sub.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS,
                         help="Output format (default: text)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI interface"""
    parser = build_parser()
    args = parser.parse_args(argv)

    level = "DEBUG" if args.verbose else get_environment_config()["log_level"]
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    _apply_overrides(args)

    if args.command is None:
        parser.print_help()
        print("\n💡 Quick start:")
        print("  acr-scan list-examples                 # Bundled networks")
        print("  acr-scan scan --example idhkp-idh      # Analyze one of them")
        print("  acr-scan explain networks/convex-rays.mat")
        return EXIT_OK

    scanner = AcrScanner(args.format, jobs=getattr(args, "jobs", 1))
    try:
        if args.command == "scan":
            try:
                paths = list(args.paths) + _resolve_examples(args.example)
            except KeyError as e:
                scanner.problem(f"❌ {e.args[0]}")
                return EXIT_INPUT_ERROR
            return scanner.scan(paths)
        if args.command == "sensitivity":
            return scanner.sensitivity(args.path, args.points, args.point, args.species)
        if args.command == "polynomialize":
            return scanner.polynomialize(args.path)
        if args.command == "explain":
            return scanner.explain(args.path, args.species)
        return scanner.list_examples()
    except Exception as e:
        logger.debug("unhandled error", exc_info=True)
        scanner.problem(f"❌ internal error: {type(e).__name__}: {e}")
        return EXIT_INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
