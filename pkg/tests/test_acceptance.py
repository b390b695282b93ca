"""
Acceptance suite: each test runs one pinned desk-scale criterion through
the shared scenario registry and prints its pass/fail report.

The rectangle obstruction criterion pins a value that contradicts the
multiplicity-function definition used everywhere else (including the
grid-oracle criterion); it is asserted as specified and is expected to
fail.  See notes in the scenario and the repository documentation.
"""

import pytest

from persimod.reproduce import SCENARIOS, run_scenario

CRITERIA = [
    ("hexagon", "01 hexagon Rips barcode"),
    ("hexagon-cech", "02 hexagon Cech barcode + log-scale comparison"),
    ("heart-sphere", "03 heart-sphere barcode and boundary depth"),
    ("interval-distances", "04 two-interval distance table"),
    ("reduction-oracle", "05 reduction vs rank-formula homology, 500 complexes"),
    ("normal-form", "06 normal-form round trip, 1000 barcodes"),
    ("matching-lemma", "07 matching lemma vs brute force, 500 trials"),
    ("stability", "08 stability suite: grids + Lipschitz invariants"),
    ("induced-matchings", "09 induced-matching functoriality + counterexample"),
    ("interleaving", "10 interleaving construction at the bottleneck radius"),
    ("torus-n2", "11 torus example n=2 on the 128x128 grid"),
    ("length-inequality", "12 length inequality for random trig polynomials"),
    ("rectangle-pmi", "13 rectangle involution obstruction"),
    ("gh-chain", "14 Gromov-Hausdorff vs half bottleneck"),
    ("mu-grid", "15 multiplicity function vs 1e-3 grid search"),
    ("tree-rips", "16 tree-net Rips bars bounded by 6 eps"),
    ("circle-identity", "17 circle ell = TV/2, 100 sequences"),
    ("manifold-circle", "18 circle homology inference through a width-4 window"),
    ("symplectic", "19 symplectic closed forms and rescaling bound"),
]


@pytest.mark.parametrize("name,label", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance(name, label):
    result = run_scenario(name, seed=0, slack=0.05)
    print(f"\n{label}: {'PASS' if result.passed else 'FAIL'}")
    for line in result.lines:
        print("   " + line)
    assert result.passed, f"{label}\n" + "\n".join(result.lines)


def test_every_scenario_is_covered():
    assert {name for name, _ in CRITERIA} == set(SCENARIOS)
