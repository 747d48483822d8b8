"""The truncated cuboctahedron presentation: build it, count its cells and classify its diagram.

Run with ``python demos/c8_counterexample.py``.
"""

from cubesc.builders import counterexample_c8
from cubesc.diagrams import greendlinger_classify
from cubesc.presentation import certify_Cp, enumerate_pieces


def main():
    ex = counterexample_c8()
    pres = ex.bundle.presentation
    X = pres.base
    print(f"base complex: {X.counts()} cells, {len(pres.relators)} octagonal cones")
    pieces = enumerate_pieces(pres, 2)
    for p in (8, 9):
        cert = certify_Cp(pres, p, pieces=pieces)
        print(f"C({p}): {cert.verdict}")
    cls = greendlinger_classify(ex.diagram, pres, pieces)
    print(f"diagram: {cls.kind}")


if __name__ == "__main__":
    main()
