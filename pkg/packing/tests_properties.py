"""
TESTS DE PROPRIÉTÉS DU SOLVEUR (hypothesis)

Propriétés vérifiées sur des entrées générées :
- la grille spatiale ne change aucune décision de faisabilité
- le point déplacé met le colis au contact de la facette critique
- l'aire de support du solveur est exacte sur deux couches, jamais surestimée au-delà
- la fermeture des trous ne change aucune cote z
- tout plan produit par le solveur passe le validateur indépendant
- la randomisation de degré 1 tire les permutations uniformément
"""
import itertools
from collections import Counter

import numpy as np
import hypothesis.strategies as st
from hypothesis import given, settings
from scipy.stats import chisquare

from instances.catalog import cuboid_uld, prism_uld, profile_for
from packing.domain import (IDENTITY, AlgoParams, Instance, Item, PackingParams, Placement, UldGroup,
                            admissible_orientations, apply_orientation)
from packing.extreme_points import move_point
from packing.feasibility import AREA_TOLERANCE, CheckBudget, check_support, collides, floor_placement
from packing.fleet import load_fleet
from packing.geometry import FacetPlane
from packing.grid import NaiveIndex, SpatialGrid
from packing.holes import close_holes
from packing.insertion import load_single_uld
from packing.ordering import SortingCriterion, randomize
from packing.validation import exact_support, validate_load, validate_solution

BBOX = (12, 12, 12)
# scènes de la grille : 10 000 sous le profil ci (500 exemples)
SCENES_PER_EXAMPLE = 20
PARAMS = PackingParams(max_padding_height=2, min_item_overlap=0.5)


@st.composite
def boxes(draw, bbox=BBOX, max_edge=5):
    size = tuple(draw(st.integers(1, max_edge)) for _ in range(3))
    position = tuple(draw(st.integers(0, b - s)) for b, s in zip(bbox, size))
    stackable = draw(st.booleans())
    return size, position, stackable


def as_placements(specs):
    return [
        Placement(Item(str(k), size, rotatable=False, stackable=stackable), IDENTITY, position)
        for k, (size, position, stackable) in enumerate(specs)
    ]


items_strategy = st.lists(
    st.builds(
        lambda k, l, w, h, weight, flags: (k, (l, w, h), weight, flags),
        st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4),
        st.integers(0, 5), st.sampled_from([(False, False), (True, False), (True, True)]),
    ),
    min_size=1, max_size=12,
    unique_by=lambda t: t[0],
).map(lambda specs: [
    Item(f"i{k}", size, weight=weight, rotatable=rotatable, tiltable=tiltable, stackable=(k % 4 != 0))
    for k, size, weight, (rotatable, tiltable) in specs
])


# =============================================================================
# GRILLE SPATIALE
# =============================================================================

@settings(max_examples=settings.default.max_examples * SCENES_PER_EXAMPLE)
@given(st.lists(boxes(), max_size=15), boxes())
def test_grille_equivalente_au_parcours_complet(specs, query):
    """Mêmes collisions et même verdict de support avec ou sans grille."""
    placements = as_placements(specs)
    grid, naive = SpatialGrid(BBOX, 3.0), NaiveIndex()
    for placement in placements:
        grid.register(placement)
        naive.register(placement)

    size, position, _ = query
    candidate = Placement(Item('q', size, rotatable=False), IDENTITY, position)

    def colliding(index):
        return {p.item.id for p in index.candidates_colliding(position, size)
                if collides(position, size, p.position, p.size)}

    assert colliding(grid) == colliding(naive)

    floor = floor_placement(cuboid_uld('B', *BBOX))
    with_grid = check_support([floor, *grid.candidates_below(position, size, PARAMS.max_padding_height)],
                              candidate, PARAMS)
    without = check_support([floor, *naive.candidates_below(position, size, PARAMS.max_padding_height)],
                            candidate, PARAMS)
    assert with_grid == without


@settings(max_examples=15)
@given(items_strategy)
def test_insertion_identique_sans_grille(items):
    uld = cuboid_uld('C', 8, 8, 8, weight_capacity=1000)
    runs = [
        load_single_uld(items, uld, SortingCriterion.CUMULATED_VOLUME, 0, False, None, CheckBudget(10 ** 6),
                        PARAMS, AlgoParams(use_grid=use_grid))
        for use_grid in (True, False)
    ]
    assert runs[0].placements == runs[1].placements


# =============================================================================
# DÉPLACEMENT ET ORIENTATIONS
# =============================================================================

@given(
    st.integers(1, 3), st.integers(1, 3), st.integers(-20, 20),
    st.tuples(st.integers(0, 20), st.integers(0, 20), st.integers(0, 20)),
    st.integers(1, 6),
)
def test_point_deplace_au_contact(a, b, offset, point, height):
    plane = FacetPlane((0, a, -b), offset)
    moved = move_point(point, (1, 1, height), plane)
    corner = (moved[0], moved[1], moved[2] + height)
    if moved == point:
        assert plane.evaluate(corner) >= -1e-9
    else:
        assert abs(plane.evaluate(corner)) < 1e-9
        assert moved[1] > point[1]


@given(st.tuples(st.integers(1, 50), st.integers(1, 50), st.integers(1, 50)), st.booleans(), st.booleans())
def test_orientations_conservent_les_dimensions(size, rotatable, tiltable):
    item = Item('a', size, rotatable=rotatable or tiltable, tiltable=tiltable)
    for orientation in admissible_orientations(item):
        assert sorted(apply_orientation(item, orientation)) == sorted(size)


# =============================================================================
# SUPPORT
# =============================================================================

@given(
    st.lists(st.booleans(), min_size=9, max_size=9),
    st.integers(0, 8), st.integers(0, 8), st.integers(1, 4), st.integers(1, 4),
)
def test_support_exact_sur_une_couche(tiles, x, y, w, d):
    supports = [
        Placement(Item(f"t{k}", (4, 4, 2), rotatable=False), IDENTITY, (4 * (k % 3), 4 * (k // 3), 0))
        for k, present in enumerate(tiles) if present
    ]
    candidate = Placement(Item('c', (w, d, 1), rotatable=False), IDENTITY, (x, y, 2))
    params = PackingParams(max_padding_height=0)
    solver = check_support(supports, candidate, params)
    exact = exact_support(candidate, supports, params)
    assert abs(solver.supported_area - exact.supported_area) < AREA_TOLERANCE
    assert solver.verdict == exact.verdict


@given(st.integers(1, 3), st.data())
def test_support_jamais_surestime_sur_plusieurs_couches(layers, data):
    """Égalité jusqu'à deux couches dans la tranche de rembourrage, minorant au-delà."""
    supports = []
    for k in range(layers):
        present = data.draw(st.lists(st.booleans(), min_size=9, max_size=9))
        supports += [
            Placement(Item(f"t{k}-{n}", (4, 4, 2), rotatable=False), IDENTITY, (4 * (n % 3) + k, 4 * (n // 3) + k, 2 * k))
            for n, tile in enumerate(present) if tile
        ]
    x, y = data.draw(st.integers(0, 10)), data.draw(st.integers(0, 10))
    w, d = data.draw(st.integers(1, 4)), data.draw(st.integers(1, 4))
    candidate = Placement(Item('c', (w, d, 1), rotatable=False), IDENTITY, (x, y, 2 * layers))
    params = PackingParams(max_padding_height=2 * layers)
    solver = check_support(supports, candidate, params)
    exact = exact_support(candidate, supports, params)
    assert solver.supported_area <= exact.supported_area + AREA_TOLERANCE
    if layers <= 2:
        assert abs(solver.supported_area - exact.supported_area) < AREA_TOLERANCE


# =============================================================================
# VALIDATION DES SORTIES DU SOLVEUR
# =============================================================================

ULDS = (
    cuboid_uld('C', 8, 8, 8, weight_capacity=40),
    prism_uld('T', 8, profile_for('upper_tilt', 8, 8, 4, 4), 40),
)


@given(items_strategy, st.sampled_from(ULDS), st.integers(0, 2 ** 16))
def test_plan_du_solveur_valide(items, uld, seed):
    instance = Instance('p', tuple(items), (UldGroup(uld),), PARAMS, AlgoParams(min_rgs_iters=1, max_rgs_iters=5, rng_seed=seed))
    solution = load_fleet(items, instance.groups, instance.packing, instance.algo)
    report = validate_solution(solution, instance)
    assert report.ok, report.as_dict()


@given(items_strategy, st.sampled_from(list(SortingCriterion)), st.integers(0, 2 ** 16))
def test_fermeture_des_trous_conserve_la_validite(items, criterion, seed):
    uld = ULDS[0]
    rng = np.random.Generator(np.random.Philox(seed))
    load = load_single_uld(items, uld, criterion, 0.5, False, rng, CheckBudget(10 ** 6), PARAMS)
    closed = close_holes(load, PARAMS)
    assert [v for v in validate_load(closed, PARAMS) if v.severity.value == 'hard'] == []
    assert sorted(i.id for i in closed.items) == sorted(i.id for i in load.items)
    heights = {p.item.id: p.position[2] for p in load.placements}
    assert all(p.position[2] == heights[p.item.id] for p in closed.placements)


# =============================================================================
# RANDOMISATION
# =============================================================================

def test_randomisation_uniforme_pour_degre_un():
    """Test du khi-deux sur les 120 permutations de cinq éléments."""
    rng = np.random.Generator(np.random.Philox(2024))
    draws = 12_000
    counts = Counter(tuple(randomize(range(5), 1.0, rng)) for _ in range(draws))
    permutations = list(itertools.permutations(range(5)))
    observed = [counts.get(p, 0) for p in permutations]
    assert sum(observed) == draws
    assert chisquare(observed).pvalue > 1e-4
