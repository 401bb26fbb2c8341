"""Command-line front end: ingest CSV matrices and label files, run the
constructions and pipelines, and emit JSON documents with every declared
scale factor, measured distance, and oracle delta.

Exit codes: 0 all verifications pass, 1 a verification failed, 2 input could
not be parsed, 3 a construction exceeded the dimension cap.  The dimension
cap is 2^14 by default and can be overridden with BLOCKLAB_CAP_QUBITS.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .applications import LabeledDataset, cca, dcca, lda, ols, pca
from .block_encoding import BlockEncoding, trivial_encoding, verify
from .centering import (
    ClassPartition,
    build_uc,
    centering_encoding,
    centering_matrix,
    ones_matrix_encoding,
    similarity_encoding,
    similarity_matrix,
)
from .data_encoding import matrix_encoding
from .matrix_core import (
    CapExceededError,
    embed_power_of_two,
    format_complex,
    read_matrix_csv,
    read_vector_csv,
    qubit_count,
    write_matrix_csv,
)
from .mean_centering import CenteringMode, classical_center, mc_encoding
from .suite import _pencil_oracle, _classical_scatters, run_suite
from . import __version__

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_PARSE = 2
EXIT_CAP = 3


@dataclass
class RunConfig:
    """Resolved invocation: command, inputs, and numeric parameters."""

    command: str
    inputs: list[str] = field(default_factory=list)
    mode: str = "cxc"
    d: int = 2
    t_bits: int = 8
    tol: float | None = None
    seed: int = 42
    out: str | None = None
    target: str = "c"
    n: int = 8
    classes: str = ""
    matrix_out: str | None = None


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        if value.ndim == 2:
            return [[_entry(v) for v in row] for row in value]
        return [_entry(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return _entry(value)
    return value


def _entry(v):
    v = complex(v)
    if v.imag == 0.0:
        return v.real
    return format_complex(v)


def _encoding_meta(name: str, be: BlockEncoding) -> dict:
    return {
        "name": name,
        "alpha": float(be.alpha),
        "ancillas": int(be.ancillas),
        "epsilon": float(be.epsilon),
        "system_qubits": int(be.system_qubits),
    }


def _emit(doc: dict, config: RunConfig, started: float) -> None:
    doc["timing"] = {
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "wall_time_s": time.perf_counter() - started,
    }
    text = json.dumps(_jsonable(doc), sort_keys=True, indent=2)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _base_doc(config: RunConfig) -> dict:
    return {
        "command": config.command,
        "version": __version__,
        "seed": config.seed,
        "inputs": {path: {"sha256": _digest(path)} for path in config.inputs},
    }


def _read_labels(path: str) -> np.ndarray:
    raw = read_vector_csv(path)
    labels = raw.real.astype(int)
    if np.max(np.abs(raw - labels)) > 0:
        raise ValueError(f"{path}: labels must be integers, one per line")
    return labels


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------

def _cmd_center(config: RunConfig) -> tuple[int, dict]:
    x = read_matrix_csv(config.inputs[0])
    x = embed_power_of_two(x)
    mode = CenteringMode.parse(config.mode)
    centered = classical_center(x, mode)
    be = mc_encoding(x, mode)
    tol = config.tol if config.tol is not None else 1e-8
    report = verify(be, centered, tol=tol)
    doc = _base_doc(config)
    doc["params"] = {"mode": mode.value, "tol": tol}
    doc["encodings"] = [_encoding_meta("centered-matrix", be)]
    doc["verification"] = report.to_dict()
    doc["matrix"] = centered
    if config.matrix_out:
        write_matrix_csv(config.matrix_out, centered)
    return (EXIT_OK if report.passed else EXIT_VERIFICATION), doc


def _cmd_encode(config: RunConfig) -> tuple[int, dict]:
    x = embed_power_of_two(read_matrix_csv(config.inputs[0]))
    be = matrix_encoding(x)
    tol = config.tol if config.tol is not None else 1e-9
    report = verify(be, x, tol=tol)
    doc = _base_doc(config)
    doc["params"] = {"tol": tol}
    doc["encodings"] = [_encoding_meta("data-matrix", be)]
    doc["verification"] = report.to_dict()
    return (EXIT_OK if report.passed else EXIT_VERIFICATION), doc


def _cmd_verify(config: RunConfig) -> tuple[int, dict]:
    target_name = config.target.lower()
    tol = config.tol if config.tol is not None else 1e-12
    if target_name == "c":
        be = centering_encoding(config.n)
        target = centering_matrix(config.n)
    elif target_name == "uc":
        uc = build_uc(qubit_count(config.n))
        be = trivial_encoding(uc)
        n = config.n
        target = (2.0 / n) * np.ones((n, n)) - np.eye(n)
    elif target_name == "ones":
        be = ones_matrix_encoding(config.n)
        target = np.ones((config.n, config.n))
    elif target_name == "similarity":
        sizes = tuple(int(s) for s in config.classes.split(",") if s)
        if not sizes:
            raise ValueError("--classes is required for the similarity target")
        part = ClassPartition(sizes)
        be = similarity_encoding(part)
        target = similarity_matrix(part, padded=True)
    else:
        raise ValueError(f"unknown verify target {config.target!r}")
    report = verify(be, target, tol=tol)
    doc = _base_doc(config)
    doc["params"] = {"target": target_name, "n": config.n, "tol": tol,
                     "classes": config.classes}
    doc["encodings"] = [_encoding_meta(target_name, be)]
    doc["verification"] = report.to_dict()
    return (EXIT_OK if report.passed else EXIT_VERIFICATION), doc


def _cmd_pca(config: RunConfig) -> tuple[int, dict]:
    x = read_matrix_csv(config.inputs[0])
    result = pca(x, d=config.d, t_bits=config.t_bits)
    x_e = embed_power_of_two(x)
    dim = x_e.shape[0]
    scatter = x_e @ centering_matrix(dim) @ x_e.conj().T
    classical = np.sort(np.linalg.eigvalsh(scatter))[::-1][: config.d]
    bound = float(np.linalg.norm(x) ** 2 * 2.0 ** (-config.t_bits))
    delta = float(np.max(np.abs(result.eigenvalues - classical)))
    doc = _base_doc(config)
    doc["params"] = {"d": config.d, "t_bits": config.t_bits}
    doc["results"] = {
        "eigenvalues_estimated": result.eigenvalues,
        "eigenvalues_classical": classical,
        "max_delta": delta,
        "resolution_bound": bound,
        "pass": delta <= bound,
        "eigenvectors": result.eigenvectors.T,
    }
    return (EXIT_OK if delta <= bound else EXIT_VERIFICATION), doc


def _pencil_doc(config: RunConfig, result, a_cl, b_cl) -> tuple[int, dict]:
    oracle_vals, _ = _pencil_oracle(a_cl, b_cl, config.d)
    tol = config.tol if config.tol is not None else 1e-6
    delta = float(np.max(np.abs(result.eigenvalues - oracle_vals)))
    doc = _base_doc(config)
    doc["params"] = {"d": config.d, "tol": tol}
    doc["results"] = {
        "eigenvalues": result.eigenvalues,
        "eigenvalues_oracle": oracle_vals,
        "max_delta": delta,
        "pass": delta <= tol,
        "eigenvectors": result.eigenvectors.T,
    }
    return (EXIT_OK if delta <= tol else EXIT_VERIFICATION), doc


def _cmd_lda(config: RunConfig) -> tuple[int, dict]:
    x = read_matrix_csv(config.inputs[0])
    labels = _read_labels(config.inputs[1])
    ds = LabeledDataset(x, labels)
    result = lda(ds, config.d)
    s_t, s_w, _ = _classical_scatters(ds)
    return _pencil_doc(config, result, s_t, s_w)


def _cmd_cca(config: RunConfig) -> tuple[int, dict]:
    x = read_matrix_csv(config.inputs[0])
    y = read_matrix_csv(config.inputs[1])
    result = cca(x, y, config.d)
    c = centering_matrix(x.shape[1])
    m = x @ c @ y.conj().T
    dim = x.shape[0]
    h_x = np.zeros((2 * dim, 2 * dim), dtype=complex)
    h_x[:dim, dim:] = m
    h_x[dim:, :dim] = m.conj().T
    h_y = np.zeros((2 * dim, 2 * dim), dtype=complex)
    h_y[:dim, :dim] = x @ c @ x.conj().T
    h_y[dim:, dim:] = y @ c @ y.conj().T
    return _pencil_doc(config, result, h_x, h_y)


def _cmd_dcca(config: RunConfig) -> tuple[int, dict]:
    x = read_matrix_csv(config.inputs[0])
    y = read_matrix_csv(config.inputs[1])
    labels = _read_labels(config.inputs[2])
    ds_x = LabeledDataset(x, labels)
    ds_y = LabeledDataset(y, labels)
    result = dcca(ds_x, ds_y, config.d)
    n = x.shape[1]
    c = centering_matrix(n)
    e_pad = similarity_matrix(ds_x.partition, padded=True)
    if e_pad.shape[0] != n:
        raise ValueError("label partition is incompatible with a square comparison; "
                         "use power-of-two class sizes covering all samples")
    m = x @ c @ e_pad @ c @ y.conj().T
    dim = x.shape[0]
    h_d = np.zeros((2 * dim, 2 * dim), dtype=complex)
    h_d[:dim, dim:] = m
    h_d[dim:, :dim] = m.conj().T
    h_y = np.zeros((2 * dim, 2 * dim), dtype=complex)
    h_y[:dim, :dim] = x @ c @ x.conj().T
    h_y[dim:, dim:] = y @ c @ y.conj().T
    return _pencil_doc(config, result, h_d, h_y)


def _cmd_ols(config: RunConfig) -> tuple[int, dict]:
    x = read_matrix_csv(config.inputs[0])
    y = read_vector_csv(config.inputs[1])
    reg = ols(x, y)
    x_e = embed_power_of_two(x)
    dim = x_e.shape[0]
    y_e = np.zeros(dim, dtype=complex)
    y_e[: y.shape[0]] = y
    c = centering_matrix(dim)
    closed = np.linalg.pinv(x_e.conj().T @ c @ x_e, rcond=1e-12) @ (x_e.conj().T @ (c @ y_e))
    tol = config.tol if config.tol is not None else 1e-8
    delta = float(np.max(np.abs(reg.beta_hat - closed)))
    doc = _base_doc(config)
    doc["params"] = {"tol": tol}
    doc["results"] = {
        "beta": reg.beta_hat,
        "residual_norm": reg.residual_norm,
        "effective_rank": reg.effective_rank,
        "closed_form_delta": delta,
        "pass": delta <= tol,
    }
    return (EXIT_OK if delta <= tol else EXIT_VERIFICATION), doc


def _cmd_suite(config: RunConfig) -> tuple[int, dict]:
    doc = run_suite(config.seed)
    width = max(len(c["title"]) for c in doc["suite"]["criteria"])
    for crit in doc["suite"]["criteria"]:
        status = "PASS" if crit["pass"] else "FAIL"
        print(f"criterion {crit['id']:>2}  {status}  {crit['title']:<{width}}")
    all_pass = doc["suite"]["all_pass"]
    print(f"suite: {'PASS' if all_pass else 'FAIL'} (seed {config.seed})")
    return (EXIT_OK if all_pass else EXIT_VERIFICATION), doc


_HANDLERS = {
    "center": _cmd_center,
    "encode": _cmd_encode,
    "verify": _cmd_verify,
    "pca": _cmd_pca,
    "lda": _cmd_lda,
    "cca": _cmd_cca,
    "dcca": _cmd_dcca,
    "ols": _cmd_ols,
    "suite": _cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blocklab",
        description="Block-encoded mean centering simulator",
    )
    parser.add_argument("--version", action="version", version=f"blocklab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("--seed", type=int, default=42, help="seed recorded in the report")
        if out:
            p.add_argument("--out", default=None, help="write the JSON document here")

    p = sub.add_parser("center", help="mean-center a matrix and verify the encoding")
    p.add_argument("matrix")
    p.add_argument("--mode", choices=["cx", "xc", "cxc"], default="cxc")
    p.add_argument("--matrix-out", default=None, help="write the centered matrix as CSV")
    common(p)

    p = sub.add_parser("encode", help="block-encode a matrix and verify it")
    p.add_argument("matrix")
    common(p)

    p = sub.add_parser("verify", help="verify a named construction against its target")
    p.add_argument("--target", choices=["c", "uc", "ones", "similarity"], default="c")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--classes", default="", help="comma-separated class sizes")
    common(p)

    p = sub.add_parser("pca", help="principal components via phase estimation")
    p.add_argument("matrix")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--t-bits", type=int, default=8, dest="t_bits")
    common(p)

    p = sub.add_parser("lda", help="discriminant directions from the scatter pencil")
    p.add_argument("matrix")
    p.add_argument("labels")
    p.add_argument("--d", type=int, default=2)
    common(p)

    p = sub.add_parser("cca", help="canonical correlation directions")
    p.add_argument("matrix_x")
    p.add_argument("matrix_y")
    p.add_argument("--d", type=int, default=2)
    common(p)

    p = sub.add_parser("dcca", help="class-aware canonical correlation directions")
    p.add_argument("matrix_x")
    p.add_argument("matrix_y")
    p.add_argument("labels")
    p.add_argument("--d", type=int, default=2)
    common(p)

    p = sub.add_parser("ols", help="least squares on the centered design")
    p.add_argument("matrix")
    p.add_argument("target")
    common(p)

    p = sub.add_parser("suite", help="run the full acceptance battery")
    common(p)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    # positional inputs in order: matrices first, then labels/target files
    ordered = []
    for name in ("matrix", "matrix_x", "matrix_y", "labels", "target"):
        if hasattr(args, name) and args.command != "verify":
            value = getattr(args, name)
            if isinstance(value, str):
                ordered.append(value)
    return RunConfig(
        command=args.command,
        inputs=ordered,
        mode=getattr(args, "mode", "cxc"),
        d=getattr(args, "d", 2),
        t_bits=getattr(args, "t_bits", 8),
        tol=getattr(args, "tol", None),
        seed=getattr(args, "seed", 42),
        out=getattr(args, "out", None),
        target=getattr(args, "target", "c") if args.command == "verify" else "c",
        n=getattr(args, "n", 8),
        classes=getattr(args, "classes", ""),
        matrix_out=getattr(args, "matrix_out", None),
    )


def run(config: RunConfig) -> int:
    """Execute one configured command, emitting its JSON document."""
    started = time.perf_counter()
    handler = _HANDLERS[config.command]
    code, doc = handler(config)
    _emit(doc, config, started)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = _config_from_args(args)
    try:
        return run(config)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except AssertionError as exc:
        # internal cross-checks (encoding vs classical route) count as
        # verification failures, not crashes
        print(f"verification error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
