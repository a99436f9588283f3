"""Diagram builders and the shipped corpus.

Diagrams are produced as schema dicts so they can be serialized, shipped
and reparsed.  Braid-generated tangles orient every strand upward, so a
positive braid letter yields a positive crossing.

The two-crossing rotationally symmetric unknot diagram is a reconstruction:
a clasp with both crossings positive whose 0-0 smoothing has three circles.
"""

from __future__ import annotations

import json
from importlib import resources

from .diagram import PeriodicDiagram, diagram_from_dict
from .errors import ValidationError


def braid_tangle(word: tuple[int, ...], strands: int, n: int) -> dict:
    """Tangle for a braid word, glued across the seam `n` times.

    word entries are +-k for the generator acting on strand positions
    k-1, k.  With n = 1 this is the plain closure of the braid; with n > 1
    the full diagram is the closure of the word repeated n times, with the
    rotation cycling the repeats.
    """
    if strands < 2:
        raise ValidationError("need at least 2 strands")
    crossings = []
    arcs: list[tuple[str, str]] = []
    current = [f"in{k}" for k in range(strands)]  # open tail per position
    for cid, letter in enumerate(word):
        k = abs(letter) - 1
        if not 0 <= k < strands - 1:
            raise ValidationError(f"letter {letter} out of range")
        bl, br = f"c{cid}.bl", f"c{cid}.br"
        tl, tr = f"c{cid}.tl", f"c{cid}.tr"
        if letter > 0:
            slots = [br, tr, tl, bl]  # ccw from incoming under at bottom right
        else:
            slots = [bl, br, tr, tl]
        crossings.append({"id": cid, "slots": slots})
        arcs.append((current[k], bl))
        arcs.append((current[k + 1], br))
        current[k], current[k + 1] = tl, tr
    for k in range(strands):
        arcs.append((current[k], f"out{k}"))
    return {
        "n": n,
        "tangle": {
            "crossings": crossings,
            "arcs": [sorted(a) for a in arcs],
            "seam_in": [f"in{k}" for k in range(strands)],
            "seam_out": [f"out{k}" for k in range(strands)],
            "orient": [list(a) for a in arcs],
        },
    }


def torus_2periodic(n: int) -> dict:
    """T(n, 2) with the order-2 symmetry swapping two identical braid blocks.

    The diagram is the closure of (s1 s2 ... s_{n-1})^2 on n strands; the
    quotient tangle is a single block, so the marked crossing orbit used by
    the spectral sequence is the pair of last letters.
    """
    if n < 2:
        raise ValidationError("n must be >= 2")
    word = tuple(range(1, n))
    return braid_tangle(word, n, 2)


def torus_flat(n: int) -> dict:
    """Minimal n-crossing diagram of T(n, 2), no symmetry recorded."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    return braid_tangle((1,) * n, 2, 1)


def trivial_link(pn: int, k: int, f: int) -> dict:
    """Crossingless pn-periodic trivial link: k free orbits, f fixed circles."""
    if pn < 1 or k < 0 or f < 0 or k + f == 0:
        raise ValidationError("need pn >= 1 and at least one component")
    arcs = [(f"in{j}", f"out{j}") for j in range(f)]
    arcs += [(f"loop{m}", f"loop{m}") for m in range(k)]
    return {
        "n": pn,
        "tangle": {
            "crossings": [],
            "arcs": [sorted(a) if a[0] != a[1] else list(a) for a in arcs],
            "seam_in": [f"in{j}" for j in range(f)],
            "seam_out": [f"out{j}" for j in range(f)],
            "orient": [list(a) for a in arcs],
        },
    }


def unknot_crossingless() -> dict:
    return trivial_link(1, 1, 0)


def unknot_fixed_n(n: int) -> dict:
    """Crossingless unknot drawn around the axis, rotation order n."""
    return trivial_link(n, 0, 1)


def unknot_two_crossing() -> dict:
    """2-periodic clasp diagram of the unknot, both crossings positive."""
    arcs = [("out0", "c0.0"), ("c0.1", "in0"), ("c0.2", "c0.3")]
    return {
        "n": 2,
        "tangle": {
            "crossings": [{"id": 0, "slots": ["c0.0", "c0.1", "c0.2", "c0.3"]}],
            "arcs": [sorted(a) for a in arcs],
            "seam_in": ["in0"],
            "seam_out": ["out0"],
            "orient": [list(a) for a in arcs],
        },
    }


def borromean_3periodic() -> dict:
    """Borromean rings as the closure of (s1 s2^{-1})^3, rotation order 3."""
    return braid_tangle((1, -2), 3, 3)


def corpus_specs() -> dict[str, dict]:
    """Every diagram shipped with the package, by name."""
    out = {
        "unknot0": unknot_crossingless(),
        "unknot0_n2": unknot_fixed_n(2),
        "unknot2_n2": unknot_two_crossing(),
        "borromean_n3": borromean_3periodic(),
        "trefoil": torus_flat(3),
        "hopf": torus_2periodic(2),
    }
    for n in range(2, 9):
        out[f"t{n}_2"] = torus_2periodic(n)
        out[f"t{n}_2_flat"] = torus_flat(n)
    for pn in (2, 3, 4):
        for k in range(0, 6 // pn + 1):
            for f in range(0, 7 - k * pn):
                if k + f == 0 or k * pn + f > 6:
                    continue
                out[f"trivial_p{pn}_k{k}_f{f}"] = trivial_link(pn, k, f)
    return out


def corpus_names() -> list[str]:
    return sorted(corpus_specs())


def load(name: str) -> PeriodicDiagram:
    """Load a shipped corpus diagram by name."""
    path = resources.files("pkh").joinpath(f"corpus_data/{name}.json")
    with path.open("r") as fh:
        return diagram_from_dict(json.load(fh))


def build(name: str) -> PeriodicDiagram:
    """Build a corpus diagram from its generator (no file access)."""
    return diagram_from_dict(corpus_specs()[name])


def write_corpus(directory) -> None:
    """Regenerate the shipped JSON files (development helper)."""
    import pathlib

    d = pathlib.Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, spec in corpus_specs().items():
        text = json.dumps(spec, sort_keys=True, indent=1) + "\n"
        (d / f"{name}.json").write_text(text)
