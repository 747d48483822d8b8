"""Certify or refute C(9) for dihedral Artin groups built from truncated Cayley complexes.

Run with ``python demos/artin_certification.py``.
"""

from collections import Counter

from cubesc.builders import LabeledGraph, artin_presentation
from cubesc.presentation import certify_Cp, enumerate_pieces


def main():
    for m in (3, 4, 5, 6, 7):
        pres = artin_presentation(LabeledGraph(2, {(0, 1): m}), "truncated-cayley", 2).presentation
        pieces = enumerate_pieces(pres, 2)
        cert = certify_Cp(pres, 9, pieces=pieces)
        kinds = dict(sorted(Counter(p.kind for p in pieces.pieces).items()))
        print(f"m={m}: pieces {kinds}, C(9) {cert.verdict}")


if __name__ == "__main__":
    main()
