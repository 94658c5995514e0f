"""Markdown catalogue of the corpus, rendered from the descriptors themselves.

    python -m gmpforge.sut.catalogue > docs/corpus-catalogue.md
"""

from __future__ import annotations

import inspect
import textwrap

from gmpforge.sut import SutDescriptor, registry

HEADER = """# Corpus catalogue

Generated by `python -m gmpforge.sut.catalogue`; do not edit by hand.

Each entry lists the signature, the traced source, the control-flow graph in
the plain-text adjacency format and its prime paths in canonical order. The
`Tracer` calls in each listing mark where graph nodes are visited. A loop node
is visited once per pass through its body, or once if the body never runs;
recursive programs record only their outermost activation.

Entries marked *reconstructed* have no published body: only the name, the
input kinds, the arity and the prime-path count are known, and the body was
designed to meet those constraints.
"""


def _kinds(sut: SutDescriptor) -> str:
    params = ", ".join(k.name.lower() for k in sut.signature.param_kinds)
    return f"({params}) -> {sut.signature.return_kind.name.lower()}"


def render_entry(sut: SutDescriptor) -> str:
    lines = [f"## {sut.name}", ""]
    lines.append(f"- signature: `{_kinds(sut)}`")
    lines.append(f"- prime paths: {sut.prime_path_count}")
    lines.append(f"- body: {'reconstructed' if sut.reconstructed else 'textbook form'}")
    if sut.notes:
        lines.append(f"- notes: {sut.notes}")
    lines += ["", "| node | statement |", "| --- | --- |"]
    for node in sorted(sut.node_labels):
        label = sut.node_labels[node].replace("|", "\\|")
        lines.append(f"| {node} | `{label}` |")
    source = textwrap.dedent(inspect.getsource(sut.implementation)).rstrip()
    lines += ["", "```python", source, "```", "", "```text", sut.graph.to_text().rstrip(), "```", ""]
    for i, p in enumerate(sut.graph.prime_paths):
        lines.append(f"{i}. `{' -> '.join(map(str, p.nodes))}`")
    lines.append("")
    return "\n".join(lines)


def render() -> str:
    return HEADER + "\n" + "\n".join(render_entry(s) for s in registry())


if __name__ == "__main__":
    print(render(), end="")
