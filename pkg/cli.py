"""
stabtherm command-line frontend.

Every subcommand writes its artifacts atomically into the output directory,
prints a JSON summary on stdout and records the invocation in the run
ledger. Failures print a structured error document and exit with 2
(invalid input), 3 (a checked claim failed) or 4 (a resource limit).
"""
import argparse
import dataclasses
import logging
import os
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from errors import ClaimCheckError, IncompatibleSpecError, NotAnnihilatingError, StabthermError, ValidationError
from graph_states import (
    DEFAULT_ORACLE_LIMIT,
    Graph,
    apply_pauli,
    find_isomorphism,
    graph_to_stabilizer,
    parse_graph,
    statevector,
    validate_graph_text,
)
from mite_analysis import graph_mite_criterion, is_mite_on, k_body_mite, l_local_mite, oracle_mite_on
from model_zoo import ModelBundle, export_files, get_model, list_models
from parent_hamiltonian import (
    PauliHamiltonian,
    assemble,
    assemble_orbits,
    decompose,
    energy_moments,
    enumerate_factorizations,
    no_go_audit,
    parse_hamiltonian,
    translation_orbits,
    validate_hamiltonian_text,
    verify_zero_eigenstate,
)
from pauli_core import Support
from report_export import export_report_workbook, format_table
from run_store import RunStore
from spectral_stats import (
    DEFAULT_CENTRAL_FRACTION,
    DEFAULT_SECTOR_LIMIT,
    GOE_MEAN_R_TILDE,
    POISSON_MEAN_R_TILDE,
    SymmetrySpec,
    check_symmetries,
    eigenvalues,
    histogram_table,
    pooled_momentum_statistics,
    r_statistics,
    sector_basis,
)
from stabilizer_group import (
    StabilizerTableau,
    min_weight,
    parse_tableau,
    random_stabilizer_tableau,
    validate_tableau_text,
)
from utils import atomic_write, dump_json, parse_rational

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "STABTHERM_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "./stabtherm_out"

# flags that never change artifact contents
_NON_SEMANTIC = {"output_dir", "log_level", "workers", "xlsx", "record_timing", "config", "ledger", "clear", "run_id"}


@dataclass
class RunConfig:
    subcommand: str
    action: Optional[str] = None
    model: Optional[str] = None
    name: Optional[str] = None
    n: Optional[int] = None
    tableau: Optional[str] = None
    graph: Optional[str] = None
    hamiltonian: Optional[str] = None
    k: Optional[int] = None
    l: Optional[int] = None
    m: int = 2
    subsystem: Optional[str] = None
    uniformity: bool = False
    check: bool = False
    j: Optional[str] = None
    j1: Optional[str] = None
    j2: Optional[str] = None
    j3: Optional[str] = None
    coefficients: Optional[str] = None
    orbits: Optional[str] = None
    sector: Optional[str] = None
    pool: bool = False
    bins: int = 20
    random: int = 0
    central_fraction: float = DEFAULT_CENTRAL_FRACTION
    oracle_limit: int = DEFAULT_ORACLE_LIMIT
    sector_limit: int = DEFAULT_SECTOR_LIMIT
    workers: int = 1
    seed: int = 0
    output_dir: str = DEFAULT_OUTPUT_DIR
    xlsx: bool = False
    record_timing: bool = False
    ledger: bool = True
    clear: bool = False
    run_id: Optional[int] = None
    log_level: str = "WARNING"
    config: Optional[str] = None

    @classmethod
    def from_namespace(cls, namespace: argparse.Namespace) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{key: value for key, value in vars(namespace).items() if key in names})

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def parameters(self) -> Dict[str, Any]:
        """The settings that determine artifact contents."""
        return {key: value for key, value in self.to_dict().items() if key not in _NON_SEMANTIC and value is not None}


class Run:
    """Artifact writer for one invocation."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.artifacts: List[str] = []

    def write(self, name: str, data) -> str:
        path = os.path.join(self.config.output_dir, name)
        atomic_write(path, data)
        self.artifacts.append(path)
        return path

    def write_json(self, name: str, obj: Any) -> str:
        return self.write(name, dump_json(obj))

    def write_csv(self, name: str, df: pd.DataFrame) -> str:
        return self.write(name, df.to_csv(index=False, float_format="%.17g"))

    def write_workbook(self, name: str, tables: Dict[str, pd.DataFrame]) -> Optional[str]:
        if not self.config.xlsx:
            return None
        return self.write(name, export_report_workbook({key: format_table(df) for key, df in tables.items()},
                                                       title=f"stabtherm {self.config.subcommand}"))


def _fraction(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return parse_rational(str(text))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"bad coefficient {text!r}", value=text)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}", path=path)


def _load_model(config: RunConfig) -> ModelBundle:
    if config.n is None:
        raise ValidationError("--n is required with --model")
    return get_model(config.model, config.n, j=_fraction(config.j), j1=_fraction(config.j1),
                     j2=_fraction(config.j2), j3=_fraction(config.j3))


def _load_state(config: RunConfig) -> Tuple[StabilizerTableau, Optional[Graph], Optional[ModelBundle]]:
    """Stabilizer state from --model, --tableau or --graph."""
    if config.model:
        bundle = _load_model(config)
        return bundle.tableau, bundle.graph, bundle
    if config.tableau:
        return parse_tableau(_read(config.tableau)), None, None
    if config.graph:
        graph = parse_graph(_read(config.graph))
        return graph_to_stabilizer(graph), graph, None
    raise ValidationError("one of --model, --tableau or --graph is required")


def _load_hamiltonian(config: RunConfig, bundle: Optional[ModelBundle]) -> PauliHamiltonian:
    if config.hamiltonian:
        return parse_hamiltonian(_read(config.hamiltonian))
    if bundle is not None and bundle.hamiltonian is not None:
        return bundle.hamiltonian
    raise ValidationError("a Hamiltonian is required: pass --hamiltonian or a model that carries one")


def _parse_subsystem(text: str, n: int) -> Support:
    try:
        sites = [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise ValidationError(f"bad subsystem {text!r}; expected e.g. 1,5", subsystem=text)
    if not sites:
        raise ValidationError("the subsystem is empty", subsystem=text)
    return Support.of(sites, n)


def cmd_mite(run: Run) -> Dict[str, Any]:
    config = run.config
    tableau, graph, bundle = _load_state(config)
    started = time.perf_counter()
    verdicts = []
    if config.k is not None:
        verdicts.append(k_body_mite(tableau, config.k, config.workers).to_dict())
    if config.l is not None:
        verdicts.append(l_local_mite(tableau, config.l, config.workers).to_dict())
    if config.subsystem:
        subsystem = _parse_subsystem(config.subsystem, tableau.n_qubits)
        verdict = is_mite_on(tableau, subsystem).to_dict()
        if graph is not None:
            verdict["graph_criterion"] = graph_mite_criterion(graph, subsystem)
            if graph.n_vertices <= config.oracle_limit:
                verdict["oracle"] = oracle_mite_on(graph, subsystem)
        verdicts.append(verdict)
    delta = min_weight(tableau, tableau.n_qubits)
    summary: Dict[str, Any] = {"command": "mite", "N": tableau.n_qubits, "verdicts": verdicts, "delta_G": delta}
    if verdicts:
        failing = next((verdict for verdict in verdicts if not verdict["holds"]), verdicts[0])
        summary["property"] = failing["property"]
        summary["witness"] = failing["witness"]
    if config.uniformity:
        summary["max_uniformity"] = delta - 1
    claims = None
    if bundle is not None and (config.check or not verdicts):
        results = bundle.check_claims(config.workers)
        claims = bundle.claims_table(results)
        summary["claims"] = [result.to_dict() for result in results]
    if verdicts:
        summary["holds"] = all(verdict["holds"] for verdict in verdicts)
    summary["parameters"] = config.parameters()
    if config.record_timing:
        summary["timing"] = {"seconds": time.perf_counter() - started}
    run.write_json("mite.json", summary)
    tables = {"verdicts": pd.DataFrame([{k: v for k, v in verdict.items() if k != "witness"} for verdict in verdicts])}
    if claims is not None:
        tables["claims"] = claims
    run.write_workbook("mite.xlsx", tables)
    if config.check and claims is not None and not claims["passed"].all():
        raise ClaimCheckError("model claims failed", failed=claims.loc[~claims["passed"], "claim"].tolist())
    return summary


def _select_orbits(config: RunConfig, orbits: Sequence) -> Tuple[List[int], List[Fraction]]:
    if config.orbits:
        try:
            chosen = [int(item) for item in config.orbits.split(",") if item.strip()]
        except ValueError:
            raise ValidationError(f"bad orbit list {config.orbits!r}", orbits=config.orbits)
        if any(not 0 <= index < len(orbits) for index in chosen):
            raise ValidationError(f"orbit index outside 0..{len(orbits) - 1}", orbits=config.orbits)
    else:
        chosen = list(range(len(orbits)))
    if config.coefficients:
        values = [_fraction(item) for item in config.coefficients.split(",") if item.strip()]
        if len(values) != len(chosen):
            raise ValidationError("one coefficient per selected orbit is required",
                                  orbits=len(chosen), coefficients=len(values))
    else:
        rng = np.random.default_rng(config.seed)
        draws = rng.integers(1, 4, size=len(chosen)) * rng.choice([-1, 1], size=len(chosen))
        values = [Fraction(int(value)) for value in draws]
    return chosen, values


def cmd_synth(run: Run) -> Dict[str, Any]:
    config = run.config
    tableau, _, _ = _load_state(config)
    factorizations = enumerate_factorizations(tableau, config.m, config.workers)
    real = [f for f in factorizations if f.is_real_phase]
    if tableau.is_translation_invariant():
        orbits = translation_orbits(real)
    else:
        orbits = [(f,) for f in real]
    chosen, values = _select_orbits(config, orbits)
    selected = [orbits[index] for index in chosen]
    h = assemble_orbits(selected, values, tableau.n_qubits)
    if not verify_zero_eigenstate(h, tableau):
        raise ClaimCheckError("the synthesized Hamiltonian does not annihilate the state")
    run.write("hamiltonian.ham", h.to_text())
    provenance = {
        "command": "synth",
        "N": tableau.n_qubits,
        "m": config.m,
        "factorization_count": len(factorizations),
        "real_phase_count": len(real),
        "orbit_count": len(orbits),
        "orbits": [
            {"index": index, "coefficient": value, "bundles": [f.to_dict() for f in orbits[index]]}
            for index, value in zip(chosen, values)
        ],
        "hamiltonian": h.to_dict(),
        "parameters": config.parameters(),
    }
    run.write_json("synth.json", provenance)
    return {"command": "synth", "N": tableau.n_qubits, "terms": len(h), "locality": h.locality,
            "orbits_used": len(chosen), "zero_energy": True}


def _oracle_residual(graph: Graph, h: PauliHamiltonian, limit: int) -> float:
    vector = statevector(graph, limit)
    result = np.zeros_like(vector)
    for p, value in h:
        result += float(value) * apply_pauli(p, vector)
    return float(np.linalg.norm(result))


def cmd_verify(run: Run) -> Dict[str, Any]:
    config = run.config
    tableau, graph, bundle = _load_state(config)
    h = _load_hamiltonian(config, bundle)
    first, second = energy_moments(h, tableau)
    zero_energy = first == 0 and second == 0
    summary: Dict[str, Any] = {
        "command": "verify",
        "N": tableau.n_qubits,
        "zero_energy": zero_energy,
        "expectation_H": first,
        "expectation_H2": second,
    }
    try:
        certificate = decompose(h, tableau, config.workers)
    except NotAnnihilatingError as e:
        summary["obstruction"] = e.details()
    else:
        summary["certificate"] = certificate.to_dict()
        summary["reconstruction_exact"] = certificate.reconstruct() == h.terms
        summary["reassembly_exact"] = assemble(certificate.bundles(), h.n_qubits) == h
    if graph is not None and graph.n_vertices <= config.oracle_limit:
        summary["oracle_residual"] = _oracle_residual(graph, h, config.oracle_limit)
    summary["parameters"] = config.parameters()
    run.write_json("verify.json", summary)
    if config.check and not zero_energy:
        raise ClaimCheckError("the Hamiltonian does not annihilate the state", expectation=str(first))
    return {key: summary[key] for key in ("command", "N", "zero_energy", "expectation_H", "expectation_H2")}


def _spectrum_spec(config: RunConfig, n: int) -> SymmetrySpec:
    return SymmetrySpec.parse(config.sector or "", n)


def cmd_spectrum(run: Run) -> Dict[str, Any]:
    config = run.config
    _, _, bundle = _load_state(config) if (config.model or config.tableau or config.graph) else (None, None, None)
    h = _load_hamiltonian(config, bundle)
    n = h.n_qubits
    spec = _spectrum_spec(config, n)
    started = time.perf_counter()
    if config.pool:
        required = SymmetrySpec(0, 1, spec.spin_flip_x, spec.spin_flip_z)
        if not check_symmetries(h, required):
            raise IncompatibleSpecError("the Hamiltonian lacks a symmetry needed for pooled sectors",
                                        sector=required.label())
        pooled = pooled_momentum_statistics(h, spec.spin_flip_x, spec.spin_flip_z, config.central_fraction,
                                            config.sector_limit, config.workers)
        for sector, levels, _ in pooled.sectors:
            run.write_csv(f"eigenvalues_{sector.label().replace(',', '_').replace('=', '')}.csv",
                          pd.DataFrame({"eigenvalue": levels}))
        r_values = pooled.r_values
        summary = {"command": "spectrum", **pooled.to_dict(), "sector": f"pooled over k (px={spec.spin_flip_x}, pz={spec.spin_flip_z})"}
    else:
        if not check_symmetries(h, spec):
            raise IncompatibleSpecError(f"the Hamiltonian does not commute with the sector {spec.label()}", sector=spec.label())
        basis = sector_basis(n, spec, config.sector_limit)
        levels = eigenvalues(h, basis, config.sector_limit)
        report = r_statistics(levels, config.central_fraction, basis.dimension, zero_modes=True)
        run.write_csv(f"eigenvalues_{spec.label().replace(',', '_').replace('=', '')}.csv",
                      pd.DataFrame({"eigenvalue": levels}))
        r_values = report.r_values
        summary = {"command": "spectrum", "N": n, "sector": spec.label(), **report.to_dict()}
    elapsed = time.perf_counter() - started
    histogram = histogram_table(r_values, config.bins)
    run.write_csv("r_histogram.csv", histogram)
    mean = summary["mean_r_tilde"]
    summary["reference"] = {"goe": GOE_MEAN_R_TILDE, "poisson": POISSON_MEAN_R_TILDE}
    summary["closer_to"] = "goe" if abs(mean - GOE_MEAN_R_TILDE) < abs(mean - POISSON_MEAN_R_TILDE) else "poisson"
    summary["parameters"] = config.parameters()
    if config.record_timing:
        summary["timing"] = {"seconds": elapsed}
    run.write_json("spectrum.json", summary)
    run.write_workbook("spectrum.xlsx", {"histogram": histogram})
    return summary


def cmd_audit(run: Run) -> Dict[str, Any]:
    config = run.config
    rows = []
    reports = []
    if config.random:
        if config.n is None:
            raise ValidationError("--n is required with --random")
        rng = np.random.default_rng(config.seed)
        for trial in range(config.random):
            tableau = random_stabilizer_tableau(config.n, rng)
            report = no_go_audit(tableau, config.m, config.workers)
            reports.append({"trial": trial, "tableau": tableau.to_dict(), **report.to_dict()})
            rows.append({"trial": trial, "delta": report.delta, "factorizations": report.factorization_count,
                         "mite_ceiling": report.mite_ceiling})
    else:
        tableau, _, _ = _load_state(config)
        report = no_go_audit(tableau, config.m, config.workers)
        reports.append(report.to_dict())
        rows.append({"trial": 0, "delta": report.delta, "factorizations": report.factorization_count,
                     "mite_ceiling": report.mite_ceiling})
    summary = {"command": "audit", "m": config.m, "reports": reports, "parameters": config.parameters()}
    run.write_json("audit.json", summary)
    run.write_workbook("audit.xlsx", {"audit": pd.DataFrame(rows)})
    return {"command": "audit", "m": config.m, "audited": len(reports),
            "with_annihilators": sum(1 for row in rows if row["factorizations"])}


def cmd_models(run: Run) -> Dict[str, Any]:
    config = run.config
    if config.action == "list":
        table = list_models()
        return {"command": "models list", "models": table.to_dict(orient="records")}
    config.model = config.name
    bundle = _load_model(config)
    for name, contents in sorted(export_files(bundle).items()):
        run.write(name, contents)
    return {"command": "models export", "model": bundle.to_dict(), "files": list(run.artifacts)}


def cmd_validate(run: Run) -> Dict[str, Any]:
    config = run.config
    files = []
    for kind, path, validator in (("tableau", config.tableau, validate_tableau_text),
                                  ("graph", config.graph, validate_graph_text),
                                  ("hamiltonian", config.hamiltonian, validate_hamiltonian_text)):
        if path:
            ok, message = validator(_read(path))
            files.append({"kind": kind, "path": path, "valid": ok, "message": message})
    if not files:
        raise ValidationError("pass at least one of --tableau, --graph or --hamiltonian")
    summary: Dict[str, Any] = {"command": "validate", "files": files, "valid": all(f["valid"] for f in files)}
    if config.graph and config.model and summary["valid"]:
        bundle = _load_model(config)
        if bundle.graph is None:
            raise ValidationError(f"model {bundle.name} is not a graph state", model=bundle.name)
        mapping = find_isomorphism(parse_graph(_read(config.graph)), bundle.graph)
        summary["model"] = {"name": bundle.name, "N": bundle.n_qubits, "isomorphic": mapping is not None,
                            "mapping": None if mapping is None else {str(u): v for u, v in sorted(mapping.items())}}
    if not summary["valid"]:
        raise ValidationError("invalid input files",
                              invalid=[f"{f['path']}: {f['message']}" for f in files if not f["valid"]])
    return summary


def cmd_runs(run: Run) -> Dict[str, Any]:
    store = RunStore(run.config.output_dir)
    if run.config.clear:
        total = store.get_total_runs()
        ok, message = store.clear()
        return {"command": "runs", "cleared": ok, "removed": total, "message": message}
    if run.config.run_id is not None:
        record = store.get_run(run.config.run_id)
        if record is None:
            raise ValidationError(f"no run with id {run.config.run_id}", run_id=run.config.run_id)
        return {"command": "runs", "run": record}
    sys.stdout.write(store.get_runs().to_csv(index=False))
    return {}


COMMANDS = {
    "mite": cmd_mite,
    "synth": cmd_synth,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "audit": cmd_audit,
    "models": cmd_models,
    "validate": cmd_validate,
    "runs": cmd_runs,
}


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--output-dir", default=os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR))
    parser.add_argument("--config", help="TOML file of key = value defaults")
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT)
    parser.add_argument("--sector-limit", type=int, default=DEFAULT_SECTOR_LIMIT)
    parser.add_argument("--xlsx", action="store_true", help="also write a styled workbook")
    parser.add_argument("--record-timing", action="store_true")
    parser.add_argument("--no-ledger", dest="ledger", action="store_false")
    return parser


def _state_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model")
    parser.add_argument("--n", type=int)
    parser.add_argument("--tableau")
    parser.add_argument("--graph")
    for name in ("j", "j1", "j2", "j3"):
        parser.add_argument(f"--{name}")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="stabtherm", description="Stabilizer states in thermal equilibrium.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    mite = sub.add_parser("mite", parents=[common], help="MITE verdicts")
    _state_arguments(mite)
    mite.add_argument("--k", type=int)
    mite.add_argument("--l", type=int)
    mite.add_argument("--subsystem")
    mite.add_argument("--uniformity", action="store_true")
    mite.add_argument("--check", action="store_true", help="run the model claims and fail on a mismatch")

    synth = sub.add_parser("synth", parents=[common], help="synthesize a parent Hamiltonian")
    _state_arguments(synth)
    synth.add_argument("--m", type=int, default=2)
    synth.add_argument("--orbits")
    synth.add_argument("--coefficients")

    verify = sub.add_parser("verify", parents=[common], help="zero-energy check and decomposition")
    _state_arguments(verify)
    verify.add_argument("--hamiltonian")
    verify.add_argument("--check", action="store_true")

    spectrum = sub.add_parser("spectrum", parents=[common], help="sector spectrum and gap ratios")
    _state_arguments(spectrum)
    spectrum.add_argument("--hamiltonian")
    spectrum.add_argument("--sector")
    spectrum.add_argument("--pool", action="store_true")
    spectrum.add_argument("--central-fraction", type=float, default=DEFAULT_CENTRAL_FRACTION)
    spectrum.add_argument("--bins", type=int, default=20)

    audit = sub.add_parser("audit", parents=[common], help="no-go audit")
    _state_arguments(audit)
    audit.add_argument("--m", type=int, default=2)
    audit.add_argument("--random", type=int, default=0, help="audit this many random groups of size --n")

    models = sub.add_parser("models", parents=[common], help="list or export models")
    models.add_argument("action", choices=["list", "export"])
    models.add_argument("name", nargs="?")
    models.add_argument("--n", type=int)
    for name in ("j", "j1", "j2", "j3"):
        models.add_argument(f"--{name}")

    validate = sub.add_parser("validate", parents=[common], help="check input files")
    _state_arguments(validate)
    validate.add_argument("--hamiltonian")

    runs = sub.add_parser("runs", parents=[common], help="show the run ledger")
    runs.add_argument("--clear", action="store_true")
    runs.add_argument("--id", dest="run_id", type=int, help="show one run as JSON")
    return parser


def _config_defaults(argv: Sequence[str]) -> Dict[str, Any]:
    config_only = argparse.ArgumentParser(add_help=False)
    config_only.add_argument("--config")
    known, _ = config_only.parse_known_args(argv)
    if not known.config:
        return {}
    try:
        with open(known.config, "rb") as handle:
            values = tomllib.load(handle)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ValidationError(f"cannot load config {known.config}: {e}", path=known.config)
    return {key.replace("-", "_"): value for key, value in values.items()}


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Flags win over --config file values, which win over built-in defaults."""
    argv = list(sys.argv[1:] if argv is None else argv)
    defaults = _config_defaults(argv)
    parser = build_parser()
    if defaults:
        for action in parser._subparsers._group_actions:
            for subparser in action.choices.values():
                subparser.set_defaults(**defaults)
    namespace = parser.parse_args(argv)
    config = RunConfig.from_namespace(namespace)
    if config.workers < 1:
        raise ValidationError("--workers must be at least 1", workers=config.workers)
    if config.subcommand == "models" and config.action == "export" and not config.name:
        raise ValidationError("models export needs a model name")
    return config


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except StabthermError as e:
        sys.stdout.write(dump_json(e.details()))
        return e.exit_code

    logging.basicConfig(
        level=getattr(logging, str(config.log_level).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    run = Run(config)
    exit_code = 0
    try:
        summary = COMMANDS[config.subcommand](run)
    except StabthermError as e:
        logger.error("%s failed: %s", config.subcommand, e.message)
        summary = e.details()
        exit_code = e.exit_code
    if summary:
        sys.stdout.write(dump_json(summary))
    if config.ledger and config.subcommand != "runs":
        store = RunStore(config.output_dir)
        store.record_run(config.subcommand, config.parameters(), config.seed, exit_code,
                         summary.get("error") or summary.get("command"), run.artifacts)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
