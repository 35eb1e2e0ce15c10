"""Command-line entry points.

One subcommand per pipeline stage: ``spectrum`` and ``embed`` expose
the spectral side, ``cluster`` and ``classify`` the softmax side,
``eigenmap`` and ``pca`` the Laplacian and Euclidean bridges, and
``eval`` scores label files against each other. All randomness flows
from the single ``--seed`` flag; per-stage generators are derived from
it with fixed tags, so any command run twice writes identical bytes.

Exit codes: 0 success, 1 usage, 2 malformed or invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import zlib

import numpy as np

from .errors import FormatError, NumericalError
from .evaluate import load_labels, micro_macro_f1, train_test_split, write_report_tsv
from .graph import Graph, load_edge_list, write_id_map
from .modularity import ModularityMatrix, modularity_matrix
from .sampling import (
    MAX_WALK_LENGTH,
    SampledGraph,
    edge_sampling,
    exp_distance_sampling,
    random_walk_sampling,
)
from .semimetric import load_points, pca_embedding, resistance_distance
from .semimetric import eigenmap_embedding as _eigenmap
from .softmax import (
    hard_assign,
    softmax_classify,
    softmax_cluster,
    write_history_tsv,
    zero_diagonal,
)
from .spectral import Embedding, reconstruct, select_dimension, top_k_eigen


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(message)


# ===================================================================
# Shared argument handling
# ===================================================================


def _add_sampler_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--sampler",
        default="edge",
        help="edge | walk:L | expdist (default: edge)",
    )
    p.add_argument(
        "--theta",
        type=float,
        default=None,
        help="decay rate for the expdist sampler (default: -1e-3 / max distance)",
    )
    p.add_argument(
        "--exact-length",
        action="store_true",
        help="walk sampler: use walks of exactly length L instead of the 1..L mixture",
    )


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")


def _parse_dim(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        k = int(text)
    except ValueError:
        raise _UsageError(f"--dim must be 'auto' or a positive integer, got {text!r}") from None
    if k < 1:
        raise _UsageError(f"--dim must be positive, got {k}")
    return k


def _parse_sampler(spec: str) -> tuple[str, int]:
    if spec == "edge":
        return "edge", 0
    if spec == "expdist":
        return "expdist", 0
    if spec.startswith("walk:"):
        try:
            length = int(spec.split(":", 1)[1])
        except ValueError:
            raise _UsageError(f"bad walk length in sampler spec {spec!r}") from None
        if not 1 <= length <= MAX_WALK_LENGTH:
            raise _UsageError(f"walk length must be in 1..{MAX_WALK_LENGTH}, got {length}")
        return "walk", length
    raise _UsageError(f"unknown sampler {spec!r} (expected edge, walk:L, or expdist)")


def _load_graph(path: str) -> Graph:
    with open(path) as fh:
        return load_edge_list(fh)


def _sample(args: argparse.Namespace, g: Graph) -> SampledGraph:
    kind, length = _parse_sampler(args.sampler)
    if kind == "edge":
        return edge_sampling(g)
    if kind == "walk":
        return random_walk_sampling(g, length, exact_length=args.exact_length)
    return exp_distance_sampling(resistance_distance(g), theta=args.theta)


def _stage_seed(seed: int, tag: str) -> int:
    ss = np.random.SeedSequence([seed & 0xFFFFFFFF, zlib.crc32(tag.encode())])
    return int(ss.generate_state(1)[0])


def _embed_with_spectrum(
    q: ModularityMatrix, dim: int | None, tol: float
) -> tuple[Embedding, np.ndarray, int]:
    """Top eigenvectors plus the spectrum that picked their number."""
    pairs = top_k_eigen(q.q, q.n, tol=tol)
    if dim is None:
        k = select_dimension(pairs.values, q.n) if q.n >= 2 else 1
    else:
        if dim > q.n:
            raise _UsageError(f"--dim {dim} exceeds the node count {q.n}")
        k = dim
    h = pairs.vectors[:, :k]
    return Embedding(h=h, mode="spectral"), pairs.values, k


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


def _write_lines(path: str, lines: list[str]) -> None:
    fh, owned = _open_out(path)
    try:
        fh.write("\n".join(lines) + "\n")
    finally:
        if owned:
            fh.close()


def _embedding_lines(ids, h: np.ndarray, scales: np.ndarray | None = None) -> list[str]:
    k = h.shape[1]
    lines = ["node\t" + "\t".join(f"dim_{j + 1}" for j in range(k))]
    coords = h if scales is None else h * scales
    for u in range(h.shape[0]):
        lines.append(str(ids[u]) + "\t" + "\t".join(f"{v:.17g}" for v in coords[u]))
    return lines


def _spectrum_lines(values: np.ndarray, selected: int) -> list[str]:
    lines = ["k\tlambda"]
    for i, v in enumerate(values, start=1):
        lines.append(f"{i}\t{v:.17g}")
    lines.append(f"# selected_k\t{selected}")
    return lines


def _write_report(rows: list[tuple[str, object]], path: str) -> None:
    if path == "-":
        sys.stdout.write("metric\tvalue\n")
        for key, value in rows:
            text = f"{value:.17g}" if isinstance(value, float) else str(value)
            sys.stdout.write(f"{key}\t{text}\n")
    else:
        write_report_tsv(rows, path)


# ===================================================================
# Subcommands
# ===================================================================


def _cmd_spectrum(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    q = modularity_matrix(_sample(args, g))
    pairs = top_k_eigen(q.q, q.n, tol=args.tol)
    selected = select_dimension(pairs.values, q.n) if q.n >= 2 else 1
    _write_lines(args.output, _spectrum_lines(pairs.values, selected))
    return 0


def _cmd_embed(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    q = modularity_matrix(_sample(args, g))
    dim = _parse_dim(args.dim)
    emb, values, k = _embed_with_spectrum(q, dim, args.tol)
    _write_lines(args.output, _embedding_lines(g.ids, emb.h))
    if args.emit_spectrum:
        _write_lines(args.emit_spectrum, _spectrum_lines(values, k))
    if args.id_map:
        write_id_map(g, args.id_map)
    return 0


def _cmd_eigenmap(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    dim = _parse_dim(args.dim)
    if dim is None:
        raise _UsageError("eigenmap needs a fixed --dim")
    emb = _eigenmap(g, dim)
    _write_lines(args.output, _embedding_lines(g.ids, emb.h))
    if args.id_map:
        write_id_map(g, args.id_map)
    return 0


def _cmd_pca(args: argparse.Namespace) -> int:
    data, names = load_points(args.data, id_column=args.id_column)
    n = data.x.shape[0]
    emb, scales = pca_embedding(data, n)
    dim = _parse_dim(args.dim)
    if dim is None:
        values = scales**2
        k = select_dimension(values, n) if n >= 2 else 1
    else:
        if dim > n:
            raise _UsageError(f"--dim {dim} exceeds the point count {n}")
        k = dim
    h = emb.h[:, :k]
    _write_lines(
        args.output,
        _embedding_lines(names, h, scales[:k] if args.scaled else None),
    )
    return 0


def _cmd_cluster(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    q = modularity_matrix(_sample(args, g))
    dim = _parse_dim(args.dim)
    if dim is None:
        pairs = top_k_eigen(q.q, q.n, tol=args.tol)
        k = max(2, select_dimension(pairs.values, q.n))
    else:
        k = dim
    result = softmax_cluster(
        q.q,
        k,
        seed=_stage_seed(args.seed, "softmax"),
        max_sweeps=args.max_sweeps,
        tol=args.tol,
        normalize=args.normalize,
    )
    assignment = hard_assign(result).assignment
    lines = ["node\tcluster"]
    lines += [f"{g.ids[u]}\t{assignment[u]}" for u in range(g.n)]
    _write_lines(args.output, lines)
    if args.emit_history:
        write_history_tsv(result, args.emit_history)
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    dataset, _ = load_labels(args.labels, g)
    q = modularity_matrix(_sample(args, g))
    dim = _parse_dim(args.dim)
    emb, values, k = _embed_with_spectrum(q, dim, args.tol)
    recomposed = zero_diagonal(reconstruct(emb))
    label_map, holdout = train_test_split(
        dataset,
        args.train_fraction,
        seed=_stage_seed(args.seed, "split"),
        stratified=not args.unstratified,
    )
    result = softmax_classify(
        recomposed,
        label_map,
        dataset.n_classes,
        seed=_stage_seed(args.seed, "softmax"),
        max_sweeps=args.max_sweeps,
        tol=args.tol,
        normalize=args.normalize,
    )
    predicted = hard_assign(result).assignment
    report = micro_macro_f1(dataset.labels, predicted, holdout, dataset.n_classes)
    rows = [
        ("micro_f1", report.micro_f1),
        ("macro_f1", report.macro_f1),
        ("selected_k", k),
        ("n_train", len(label_map)),
        ("n_holdout", int(holdout.size)),
        ("sweeps", result.sweeps),
        ("converged", str(result.converged).lower()),
    ]
    _write_report(rows, args.output)
    if args.emit_spectrum:
        _write_lines(args.emit_spectrum, _spectrum_lines(values, k))
    return 0


def _read_label_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            fields = text.split()
            if len(fields) != 2:
                raise FormatError(f"{path}: line {lineno}: expected '<node_id> <label>'")
            if fields[0] in out:
                raise FormatError(f"{path}: line {lineno}: node {fields[0]!r} repeated")
            out[fields[0]] = fields[1]
    if not out:
        raise FormatError(f"{path}: no labels found")
    return out


def _cmd_eval(args: argparse.Namespace) -> int:
    truth = _read_label_file(args.truth)
    predicted = _read_label_file(args.pred)
    missing = [node for node in predicted if node not in truth]
    if missing:
        raise FormatError(f"predicted node {missing[0]!r} has no ground truth")
    names = sorted(set(truth.values()) | set(predicted.values()))
    index = {name: i for i, name in enumerate(names)}
    nodes = sorted(predicted)
    t = np.array([index[truth[v]] for v in nodes])
    p = np.array([index[predicted[v]] for v in nodes])
    report = micro_macro_f1(t, p, None, len(names))
    rows = [
        ("micro_f1", report.micro_f1),
        ("macro_f1", report.macro_f1),
        ("n_evaluated", report.evaluated),
    ]
    _write_report(rows, args.output)
    return 0


# ===================================================================
# Parser assembly
# ===================================================================


def _build_parser() -> _Parser:
    parser = _Parser(prog="modembed", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sampler=True, dim=True):
        _add_common_flags(p)
        p.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance")
        if sampler:
            _add_sampler_flags(p)
        if dim:
            p.add_argument("--dim", default="auto", help="embedding dimension: auto or K")

    p = sub.add_parser("spectrum", help="eigenvalues of the modularity matrix")
    p.add_argument("graph", help="edge-list file")
    common(p, dim=False)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("embed", help="spectral embedding of a graph")
    p.add_argument("graph")
    common(p)
    p.add_argument("--emit-spectrum", default=None, help="also write the spectrum TSV here")
    p.add_argument("--id-map", default=None, help="write the node-id map here")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("eigenmap", help="Laplacian eigenmap embedding")
    p.add_argument("graph")
    common(p, sampler=False)
    p.add_argument("--id-map", default=None)
    p.set_defaults(func=_cmd_eigenmap)

    p = sub.add_parser("pca", help="principal components of a point set")
    p.add_argument("data", help="numeric TSV/CSV, one point per row")
    common(p, sampler=False)
    p.add_argument("--scaled", action="store_true", help="scale columns by sqrt(eigenvalue)")
    p.add_argument("--id-column", action="store_true", help="first field of each row is an id")
    p.set_defaults(func=_cmd_pca)

    p = sub.add_parser("cluster", help="softmax clustering of a graph")
    p.add_argument("graph")
    common(p)
    p.add_argument("--max-sweeps", type=int, default=1000)
    p.add_argument("--normalize", action="store_true", help="pre-scale q by 1/max|q|")
    p.add_argument("--emit-history", default=None, help="write the objective trace here")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("classify", help="semi-supervised classification benchmark")
    p.add_argument("graph")
    p.add_argument("labels", help="ground-truth label file")
    common(p)
    p.add_argument("--train-fraction", type=float, default=0.1)
    p.add_argument("--unstratified", action="store_true", help="split without class stratification")
    p.add_argument("--max-sweeps", type=int, default=1000)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--emit-spectrum", default=None)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("eval", help="score a prediction file against ground truth")
    p.add_argument("truth", help="ground-truth label file")
    p.add_argument("pred", help="predicted label file")
    _add_common_flags(p)
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
