"""Homology of coned-off presentations, computed by the CW route and the mapping-cone route.

Run with ``python demos/coned_homology.py``.
"""

from cubesc.builders import LabeledGraph, artin_presentation, cycle_relator, wedge_of_circles
from cubesc.homology import coned_homology, verify_direct_sum
from cubesc.presentation import CubicalPresentation


def main():
    C = wedge_of_circles(1)
    torsion = CubicalPresentation(C, [cycle_relator(C, [(0, 1)] * 3)])
    dihedral = artin_presentation(LabeledGraph(2, {(0, 1): 5}), "compact-cycles").presentation
    for name, pres in (("circle coned by a^3", torsion), ("dihedral m=5", dihedral)):
        both = coned_homology(pres, both=True)
        print(f"{name}: H1 {both.cw.degree(1)}, H2 {both.cw.degree(2)}, routes agree {both.agree}")
    rep = verify_direct_sum(LabeledGraph(5, {(0, 1): 2, (0, 2): 2, (1, 2): 2, (3, 4): 5}), 4)
    for row in rep.to_json()["rows"]:
        print(f"n={row['n']}: Artin {row['lhs']['betti']}, right-angled part {row['rhs']['betti']}")


if __name__ == "__main__":
    main()
