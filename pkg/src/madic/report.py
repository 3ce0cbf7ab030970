"""Verification suites and file emission: delimited reports with a rendered
summary figure, and portrait graphs as DOT text with a tree rendering."""
from __future__ import annotations

import csv
import itertools
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .calculus import GroupParams, Portrait, Vertex, equal_elements
from .errors import PreconditionError
from .family import check_spherical_transitivity, verify_generator_recursions
from .geodesics import LemmaReport, verify_length_lemmas
from .projections import (
    all_permuted_products,
    cyclic_alignment,
    rightmost_projection,
    shifted_congruence_check,
)
from .words import format_word, shift_indices

SUITES = ("lengths", "congruence", "projection", "alignment", "transitivity", "recursions")


def run_suite(params: GroupParams, suite: str, radius: int) -> list[LemmaReport]:
    """Run one named verification suite; `radius` doubles as the depth or
    projection-step bound where a ball radius makes no sense."""
    s = params.s
    if suite == "lengths":
        return verify_length_lemmas(params, radius)
    if suite == "recursions":
        rep = LemmaReport("generator-recursions", 1, [], 0)
        if not verify_generator_recursions(params):
            rep.violations.append("one-level generator decomposition mismatch")
        return [rep]
    if suite == "transitivity":
        rep = LemmaReport("spherical-transitivity", 0, [], 0)
        for n in range(1, radius + 1):
            rep.instances_checked += 1
            if not check_spherical_transitivity(params, n):
                rep.violations.append(f"orbit of 0^{n} is not the whole layer")
        return [rep]
    if suite == "congruence":
        rep = LemmaReport("shifted-congruence", 0, [], 0)
        for prod in all_permuted_products(s):
            for j in range(1, radius + 1):
                rep.instances_checked += 1
                if not shifted_congruence_check(params, prod.word(), j):
                    rep.violations.append(f"{format_word(prod.word())} at j={j}")
        return [rep]
    if suite == "projection":
        rep = LemmaReport("rightmost-projection-shift", 0, [], 0)
        for prod in all_permuted_products(s):
            w = prod.word()
            for j in range(radius + 1):
                rep.instances_checked += 1
                got = rightmost_projection(params, w, j)
                want = shift_indices(w, -j, s)
                if not equal_elements(params, got, want):
                    rep.violations.append(f"{format_word(w)} at j={j}")
        return [rep]
    if suite == "alignment":
        rep = LemmaReport("cyclic-alignment", 0, [], 0)
        for prod in all_permuted_products(s):
            if any(e != 1 for e in prod.signs):
                continue
            for target in range(s):
                rep.instances_checked += 1
                try:
                    cyclic_alignment(params, prod, target)
                except Exception as exc:
                    rep.violations.append(
                        f"{format_word(prod.word())} target {target}: {exc}"
                    )
        return [rep]
    raise PreconditionError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")


def write_report_csv(reports: list[LemmaReport], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lemma", "instances_checked", "violations", "unverified"])
        for rep in reports:
            writer.writerow(
                [rep.lemma, rep.instances_checked, len(rep.violations), rep.unverified]
            )


def render_report_figure(reports: list[LemmaReport], path: Path) -> None:
    """Bar chart of instances checked per check, violations overlaid in red."""
    names = [rep.lemma for rep in reports]
    checked = [rep.instances_checked for rep in reports]
    bad = [len(rep.violations) for rep in reports]
    fig, ax = plt.subplots(figsize=(max(4, 1.6 * len(names)), 3.2))
    xs = range(len(names))
    ax.bar(xs, checked, color="#4878a8", label="checked")
    if any(bad):
        ax.bar(xs, bad, color="#c0392b", label="violations")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("instances")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def portrait_dot(p: Portrait) -> str:
    """DOT digraph with vertex labels "path:exponent" (root path is empty)."""
    lines = ["digraph portrait {", "  node [shape=circle, fontsize=10];"]
    for prefix, exp in sorted(p.labels.items()):
        name = "n" + "".join(map(str, prefix))
        path = "".join(map(str, prefix))
        lines.append(f'  {name} [label="{path}:{exp}"];')
    for prefix in sorted(p.labels):
        if prefix:
            parent = "n" + "".join(map(str, prefix[:-1]))
            lines.append(f'  {parent} -> n{"".join(map(str, prefix))};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_portrait_figure(p: Portrait, m: int, path: Path) -> None:
    """Draw the truncated tree; each node shows its root-exponent label."""
    pos: dict[tuple[int, ...], tuple[float, float]] = {}

    def place(prefix: tuple[int, ...], lo: float, hi: float) -> None:
        pos[prefix] = ((lo + hi) / 2, -len(prefix))
        if len(prefix) + 1 < p.depth:
            step = (hi - lo) / m
            for x in range(m):
                place(prefix + (x,), lo + x * step, lo + (x + 1) * step)

    place((), 0.0, 1.0)
    fig, ax = plt.subplots(figsize=(max(4, m ** (p.depth - 1)), 1.2 * p.depth))
    for prefix in pos:
        if prefix:
            x0, y0 = pos[prefix[:-1]]
            x1, y1 = pos[prefix]
            ax.plot([x0, x1], [y0, y1], color="#999999", zorder=1, linewidth=0.8)
    for prefix, (x, y) in pos.items():
        ax.scatter([x], [y], s=320, color="#e8eef5", edgecolor="#4878a8", zorder=2)
        ax.annotate(
            str(p.labels[prefix]), (x, y), ha="center", va="center", fontsize=9, zorder=3
        )
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
