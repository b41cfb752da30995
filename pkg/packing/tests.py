"""
TESTS DU SOLVEUR DE CHARGEMENT - ULDPACK

Tests pour:
1. Modèle (orientations, colis, ULD)
2. Géométrie et grille spatiale
3. Faisabilité et support
4. Points extrêmes
5. Ordre de chargement
6. Insertion, score et recherche gloutonne randomisée
7. Fermeture des trous
8. Chargement de flotte et validation indépendante
"""
from collections import namedtuple
from unittest.mock import MagicMock

import numpy as np
from django.test import SimpleTestCase, override_settings

from instances.catalog import cuboid_uld, prism_uld, profile_for
from packing.domain import (IDENTITY, AlgoParams, Instance, Item, Orientation, PackingParams, Placement,
                            Tilt, UldGroup, UldLoad, admissible_orientations, apply_orientation)
from packing.config import get_packing_config, parse_overrides, reset_packing_config
from packing.exceptions import PackingException
from packing.extreme_points import (generate_new_points, init_store, move_point, next_point, project,
                                    resolve_position, wall_coordinate, ExtremePoint)
from packing.feasibility import (CheckBudget, LoadingState, can_load_at, check_support, collides,
                                 floor_placement)
from packing.fleet import build_fit_table, item_fits_group, load_fleet, select_next_uld
from packing.geometry import (FacetPlane, base_area_overlap, fits_bounding_box, inside_tilted_facet,
                              triple_base_area_overlap)
from packing.grid import SpatialGrid, mean_edge
from packing.holes import Direction, close_holes, find_holes, movable_set, slide
from packing.insertion import adapt_uld, load_single_uld, prepare_state
from packing.ordering import (SortingCriterion, build_groups, build_order, orientations_for, randomize,
                              sort_groups, IdenticalGroup)
from packing.rgs import iteration_plan, run_rgs
from packing.scoring import cog_deviation, score
from packing.services import PackingService, get_packing_service
from packing.validation import exact_support, validate_load, validate_solution

Box = namedtuple('Box', 'position size')

FAST = AlgoParams(min_rgs_iters=1, max_rgs_iters=5)


def put(item_id, size, position, stackable=True, weight=0):
    item = Item(item_id, size, weight=weight, rotatable=False, stackable=stackable)
    return Placement(item, IDENTITY, position)


def upper_tilt_uld(weight_capacity=1000):
    """Section 10 x 10, facette inclinée y - z >= -1 en haut à gauche."""
    return prism_uld('T', 10, profile_for('upper_tilt', 10, 10, 9, 9), weight_capacity)


def rng(seed=0):
    return np.random.Generator(np.random.Philox(seed))


# =============================================================================
# TESTS DU MODÈLE
# =============================================================================

class OrientationTest(SimpleTestCase):
    """Convention des orientations : inclinaison puis rotation."""

    def test_rotation_echange_longueur_largeur(self):
        self.assertEqual(Orientation(Tilt.NONE, True).apply((2, 3, 5)), (3, 2, 5))

    def test_identite(self):
        self.assertEqual(IDENTITY.apply((2, 3, 5)), (2, 3, 5))

    def test_inclinaisons(self):
        self.assertEqual(Orientation(Tilt.ACROSS_X).apply((2, 3, 5)), (2, 5, 3))
        self.assertEqual(Orientation(Tilt.ACROSS_Y).apply((2, 3, 5)), (5, 3, 2))

    def test_six_orientations_sont_des_permutations_distinctes(self):
        item = Item('a', (2, 3, 5), rotatable=True, tiltable=True)
        sizes = {apply_orientation(item, o) for o in admissible_orientations(item)}
        self.assertEqual(len(sizes), 6)
        self.assertTrue(all(sorted(s) == [2, 3, 5] for s in sizes))

    def test_nombre_orientations_admises(self):
        self.assertEqual(len(admissible_orientations(Item('a', (2, 3, 5), rotatable=False))), 1)
        self.assertEqual(len(admissible_orientations(Item('a', (2, 3, 5)))), 2)
        self.assertEqual(len(admissible_orientations(Item('a', (2, 3, 5), tiltable=True))), 6)

    def test_orientation_non_admise(self):
        item = Item('a', (2, 3, 5), rotatable=False)
        with self.assertRaises(PackingException) as ctx:
            apply_orientation(item, Orientation(Tilt.NONE, True))
        self.assertEqual(ctx.exception.error_code, 'INADMISSIBLE_ORIENTATION')


class ItemUldModelTest(SimpleTestCase):
    """Invariants des colis et des ULD."""

    def test_colis_inclinable_non_rotatif_refuse(self):
        with self.assertRaises(PackingException) as ctx:
            Item('a', (1, 2, 3), rotatable=False, tiltable=True)
        self.assertEqual(ctx.exception.error_code, 'INVALID_ITEM')

    def test_dimension_nulle_refusee(self):
        with self.assertRaises(PackingException):
            Item('a', (1, 0, 3))

    def test_cuboide_volume_par_defaut(self):
        uld = cuboid_uld('C', 4, 5, 6, weight_capacity=10)
        self.assertEqual(uld.bounding_box, (4, 5, 6))
        self.assertAlmostEqual(uld.volume_capacity, 120.0)
        self.assertEqual(uld.tilted_planes, ())

    def test_facette_inclinee_critique(self):
        uld = upper_tilt_uld()
        self.assertEqual(len(uld.tilted_planes), 1)
        plane = uld.critical_planes[0]
        self.assertEqual(plane.normal, (0, 1, -1))
        self.assertEqual(plane.offset, -1)

    def test_uld_non_convexe_refusee(self):
        with self.assertRaises(PackingException) as ctx:
            prism_uld('N', 10, [(0, 0), (10, 0), (10, 10), (5, 5), (0, 10)], 100)
        self.assertEqual(ctx.exception.error_code, 'INVALID_ULD')

    def test_bord_trop_large(self):
        with self.assertRaises(PackingException):
            cuboid_uld('C', 10, 10, 10, weight_capacity=1, edge_width=5, edge_offset=2)

    def test_cog_sans_masse(self):
        load = UldLoad(cuboid_uld('C', 10, 10, 10), (put('a', (1, 1, 1), (0, 0, 0)),))
        self.assertIsNone(load.cog)


# =============================================================================
# TESTS DE GÉOMÉTRIE
# =============================================================================

class GeometryTest(SimpleTestCase):

    def test_boite_englobante(self):
        self.assertTrue(fits_bounding_box((0, 0, 0), (5, 5, 5), (5, 5, 5)))
        self.assertFalse(fits_bounding_box((1, 0, 0), (5, 5, 5), (5, 5, 5)))
        self.assertTrue(fits_bounding_box((2, 3, 0), (3, 2, 5), (5, 5, 5)))

    def test_facette_inclinee(self):
        plane = FacetPlane((0, 1, -1), -1)
        self.assertTrue(inside_tilted_facet((0, 0, 0), (1, 1, 1), plane))
        self.assertFalse(inside_tilted_facet((0, 0, 0), (1, 1, 2), plane))

    def test_plan_parallele_aux_axes_refuse(self):
        with self.assertRaises(PackingException) as ctx:
            inside_tilted_facet((0, 0, 0), (1, 1, 1), FacetPlane((0, 0, 1), 0))
        self.assertEqual(ctx.exception.error_code, 'AXIS_PARALLEL_PLANE')

    def test_recouvrement_deux_empreintes(self):
        self.assertEqual(base_area_overlap(Box((0, 0, 0), (2, 2, 1)), Box((0, 0, 0), (2, 2, 1))), 4)
        self.assertEqual(base_area_overlap(Box((0, 0, 0), (2, 2, 1)), Box((2, 0, 0), (2, 2, 1))), 0)
        self.assertEqual(base_area_overlap(Box((0, 0, 0), (3, 3, 1)), Box((1, 1, 0), (3, 3, 1))), 4)

    def test_recouvrement_trois_empreintes(self):
        unit = Box((0, 0, 0), (1, 1, 1))
        self.assertEqual(triple_base_area_overlap(unit, unit, unit), 1)
        far = Box((5, 5, 0), (1, 1, 1))
        self.assertEqual(triple_base_area_overlap(unit, far, unit), 0)
        self.assertEqual(triple_base_area_overlap(
            Box((0, 0, 0), (4, 4, 1)), Box((2, 0, 0), (4, 4, 1)), Box((3, 0, 0), (2, 4, 1))), 4)


# =============================================================================
# TESTS DE LA GRILLE SPATIALE
# =============================================================================

class SpatialGridTest(SimpleTestCase):

    def test_taille_moyenne(self):
        self.assertEqual(mean_edge([Item('a', (3, 3, 3))]), 3)
        self.assertEqual(mean_edge([Item('a', (1, 2, 3)), Item('b', (4, 5, 6))]), 3.5)
        with self.assertRaises(PackingException) as ctx:
            mean_edge([])
        self.assertEqual(ctx.exception.error_code, 'EMPTY_ITEM_SET')

    def test_cellules_couvertes(self):
        grid = SpatialGrid((12, 12, 12), 4)
        self.assertEqual(grid.cells_for_box((0, 0, 0), (10, 10, 10)), ((0, 2), (0, 2), (0, 2)))
        self.assertEqual(grid.cells_for_box((4, 4, 4), (4, 4, 4)), ((1, 1), (1, 1), (1, 1)))
        self.assertEqual(grid.cells_for_box((3, 0, 0), (2, 1, 1))[0], (0, 1))

    def test_grille_vide(self):
        grid = SpatialGrid((12, 12, 12), 4)
        self.assertEqual(grid.candidates_colliding((0, 0, 0), (4, 4, 4)), [])
        self.assertEqual(grid.candidates_below((0, 0, 4), (4, 4, 4), 2), [])

    def test_placement_loin_sous_la_tranche(self):
        grid = SpatialGrid((8, 8, 16), 4)
        low = put('low', (2, 2, 2), (0, 0, 0))
        near = put('near', (2, 2, 2), (0, 0, 10))
        grid.register(low)
        grid.register(near)
        below = grid.candidates_below((0, 0, 12), (2, 2, 2), 2)
        self.assertIn(near, below)
        self.assertNotIn(low, below)


# =============================================================================
# TESTS DE FAISABILITÉ
# =============================================================================

class CollisionTest(SimpleTestCase):

    def test_contact_sans_collision(self):
        self.assertFalse(collides((0, 0, 0), (2, 2, 2), (2, 0, 0), (2, 2, 2)))

    def test_collisions(self):
        self.assertTrue(collides((0, 0, 0), (2, 2, 2), (1, 1, 1), (2, 2, 2)))
        self.assertTrue(collides((0, 0, 0), (4, 1, 1), (3, 0, 0), (4, 1, 1)))


class SupportTest(SimpleTestCase):
    """Contrôle de non-flottement et de gerbabilité."""

    def setUp(self):
        self.uld = cuboid_uld('C', 20, 20, 20, weight_capacity=100)
        self.floor = floor_placement(self.uld)

    def test_sur_le_plancher(self):
        candidate = put('a', (4, 4, 4), (0, 0, 0))
        report = check_support([self.floor], candidate, PackingParams())
        self.assertTrue(report.directly_supported)
        self.assertEqual(report.supported_area, 16)
        self.assertTrue(report.verdict)

    def test_moitie_supportee(self):
        support = put('s', (2, 2, 2), (0, 0, 0))
        candidate = put('c', (4, 2, 1), (0, 0, 2))
        strict = check_support([support], candidate, PackingParams(max_padding_height=0, min_item_overlap=0.9))
        loose = check_support([support], candidate, PackingParams(max_padding_height=0, min_item_overlap=0.5))
        self.assertEqual(strict.supported_corner_count, 2)
        self.assertFalse(strict.verdict)
        self.assertTrue(loose.verdict)

    def test_pose_sur_non_gerbable(self):
        support = put('s', (4, 4, 2), (0, 0, 0), stackable=False)
        candidate = put('c', (4, 4, 1), (0, 0, 2))
        self.assertFalse(check_support([self.floor, support], candidate, PackingParams()).verdict)

    def test_supports_empiles_sous_estimes(self):
        """Seul le support le plus haut compte quand les supports sont empilés."""
        params = PackingParams(max_padding_height=2)
        item1 = put('1', (8, 4, 1), (0, 0, 0))
        item2 = put('2', (4, 4, 1), (4, 0, 1))
        item3 = put('3', (4, 4, 1), (4, 0, 2))
        item4 = put('4', (8, 4, 1), (0, 0, 3))
        loaded = [self.floor, item1, item2, item3]
        report = check_support(loaded, item4, params)
        self.assertEqual(report.supported_area, item3.footprint_area)
        self.assertFalse(report.verdict)
        exact = exact_support(item4, loaded, params)
        self.assertEqual(exact.supported_area, 32)
        self.assertTrue(exact.verdict)


class CanLoadAtTest(SimpleTestCase):

    def test_uld_vide(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        state = LoadingState(uld, PackingParams(), AlgoParams(), 2.0)
        self.assertTrue(can_load_at(state, Item('a', (2, 2, 2), weight=5), IDENTITY, (0, 0, 0)))

    def test_capacite_massique(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        state = LoadingState(uld, PackingParams(), AlgoParams(), 2.0)
        self.assertFalse(can_load_at(state, Item('a', (2, 2, 2), weight=11), IDENTITY, (0, 0, 0)))

    def test_point_deplace_seul_admissible(self):
        uld = upper_tilt_uld()
        state = LoadingState(uld, PackingParams(), AlgoParams(), 2.0)
        item = Item('a', (2, 2, 3), rotatable=False)
        self.assertFalse(can_load_at(state, item, IDENTITY, (0, 0, 0)))
        self.assertTrue(can_load_at(state, item, IDENTITY, (0, 2, 0)))

    def test_budget_epuise(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        state = LoadingState(uld, PackingParams(), AlgoParams(), 2.0, CheckBudget(1))
        can_load_at(state, Item('a', (1, 1, 1)), IDENTITY, (0, 0, 0))
        with self.assertRaises(PackingException) as ctx:
            can_load_at(state, Item('a', (1, 1, 1)), IDENTITY, (0, 0, 0))
        self.assertEqual(ctx.exception.error_code, 'BUDGET_EXHAUSTED')


# =============================================================================
# TESTS DES POINTS EXTRÊMES
# =============================================================================

class ExtremePointTest(SimpleTestCase):

    def test_initialisation(self):
        store = init_store()
        self.assertEqual([p.coords for p in store], [(0, 0, 0)])
        store.add(ExtremePoint((0, 0, 0)))
        self.assertEqual(len(store), 1)

    def test_point_suivant_non_visite(self):
        store = init_store()
        store.extend([ExtremePoint((5, 0, 0)), ExtremePoint((0, 3, 0)), ExtremePoint((0, 0, 2))])
        visited = {(0, 0, 0), (5, 0, 0)}
        self.assertEqual(next_point(store, visited).coords, (0, 3, 0))
        visited |= {(0, 3, 0), (0, 0, 2)}
        self.assertIsNone(next_point(store, visited))

    def test_deplacement_contre_la_facette(self):
        plane = FacetPlane((0, 1, -1), -1)
        self.assertEqual(move_point((0, 2, 3), (1, 1, 1), plane), (0, 3, 3))
        self.assertEqual(move_point((0, 5, 0), (1, 1, 1), plane), (0, 5, 0))

    def test_deplacement_exige_facette_critique(self):
        with self.assertRaises(PackingException) as ctx:
            move_point((0, 0, 0), (1, 1, 1), FacetPlane((0, 1, 1), 1))
        self.assertEqual(ctx.exception.error_code, 'NOT_CRITICAL_FACET')

    def test_position_resolue_sur_paroi(self):
        uld = upper_tilt_uld()
        point = init_store(uld).ordered()[0]
        self.assertEqual(resolve_position(point, (2, 2, 3), uld, AlgoParams()), (0, 2, 0))
        self.assertEqual(resolve_position(point, (2, 2, 3), uld, AlgoParams(use_moving=False)), (0, 0, 0))

    def test_sortie_par_facette_inclinee(self):
        uld = upper_tilt_uld()
        y, facet = wall_coordinate((0, 5, 8), 1, uld)
        self.assertEqual(y, 7)
        self.assertTrue(uld.planes[facet].tilted)

    def test_projection_uld_vide(self):
        self.assertEqual([p.coords for p in project((3, 3, 3), 0, [])], [(0, 3, 3)])

    def test_projection_sur_non_gerbable(self):
        fragile = put('f', (4, 4, 2), (0, 0, 0), stackable=False)
        self.assertEqual(project((1, 1, 5), 2, [fragile]), [])
        self.assertEqual(project((1, 1, 5), 2, [fragile], crainic=True), [])
        self.assertEqual([p.coords for p in project((1, 1, 5), 2, [put('s', (4, 4, 2), (0, 0, 0))], crainic=True)],
                         [(1, 1, 2)])

    def test_premier_colis_dans_uld_vide(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        new = put('a', (2, 3, 4), (0, 0, 0))
        coords = {p.coords for p in generate_new_points([], new, uld, AlgoParams())}
        self.assertEqual(coords, {(2, 0, 0), (0, 3, 0), (0, 0, 4)})

    def test_colis_non_gerbable_sans_point_au_sommet(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        new = put('a', (2, 3, 4), (0, 0, 0), stackable=False)
        coords = {p.coords for p in generate_new_points([], new, uld, AlgoParams())}
        self.assertEqual(coords, {(2, 0, 0), (0, 3, 0)})

    def test_objet_bloquant(self):
        """L'extension de surface d'un objet masqué par un objet plus proche n'est pas émise."""
        near = put('near', (2, 4, 6), (4, 4, 0))
        hidden = put('hidden', (2, 2, 6), (1, 5, 0))
        blocked = {p.coords for p in project((8, 3, 3), 0, [near, hidden])}
        unblocked = {p.coords for p in project((8, 3, 3), 0, [near, hidden], use_blocking=False)}
        self.assertEqual(blocked, {(6, 3, 3), (0, 3, 3)})
        self.assertEqual(unblocked, {(6, 3, 3), (3, 3, 3), (0, 3, 3)})


# =============================================================================
# TESTS DE L'ORDRE DE CHARGEMENT
# =============================================================================

class OrderingTest(SimpleTestCase):

    def test_colis_identiques_regroupes(self):
        identical, _ = build_groups([Item('a', (2, 3, 5), tiltable=True), Item('b', (5, 3, 2), tiltable=True)])
        self.assertEqual(len(identical), 1)
        identical, _ = build_groups([Item('a', (2, 3, 5)), Item('b', (2, 3, 5))])
        self.assertEqual(len(identical), 1)

    def test_hauteurs_differentes_sans_inclinaison(self):
        items = [Item('a', (2, 3, 5)), Item('b', (5, 3, 2))]
        identical, similar = build_groups(items)
        self.assertEqual(len(identical), 2)
        self.assertEqual(sorted(g.height for g in similar), [2, 5])
        order = build_order(items, SortingCriterion.CUMULATED_VOLUME, 0, None)
        heights = {item.id: Orientation(orientations[0].tilt).apply(item.size)[2] for item, orientations in order}
        self.assertEqual(heights, {'a': 5, 'b': 2})

    def test_flotte_avec_hauteurs_differentes(self):
        items = (Item('a', (2, 3, 5)), Item('b', (5, 3, 2)))
        solution = load_fleet(items, (UldGroup(cuboid_uld('C', 10, 10, 10, weight_capacity=100)),),
                              PackingParams(), FAST)
        self.assertEqual(len(solution.loaded_items), 2)
        self.assertEqual(solution.unloaded, ())

    def test_groupes_similaires(self):
        _, similar = build_groups([Item('a', (2, 3, 5), tiltable=True)])
        self.assertEqual(sorted(g.height for g in similar), [2, 3, 5])
        _, similar = build_groups([Item('a', (2, 3, 5))])
        self.assertEqual([g.height for g in similar], [5])

    def test_tri_par_volume_cumule(self):
        groups = [IdenticalGroup([Item(str(v), (1, 1, v))]) for v in (10, 30, 20)]
        ordered = sort_groups(groups, SortingCriterion.CUMULATED_VOLUME)
        self.assertEqual([g.cumulated_volume for g in ordered], [30, 20, 10])

    def test_gerbables_en_premier(self):
        groups = [
            IdenticalGroup([Item('a', (5, 5, 5), stackable=False)]),
            IdenticalGroup([Item('b', (1, 1, 1))]),
        ]
        ordered = sort_groups(groups, SortingCriterion.STACKABILITY_CUMULATED)
        self.assertEqual([g.stackable for g in ordered], [True, False])

    def test_critere_aleatoire_reproductible(self):
        items = [Item(str(k), (1, 1, k + 1)) for k in range(8)]
        first = build_order(items, SortingCriterion.RANDOM, 0.5, rng(7))
        second = build_order(items, SortingCriterion.RANDOM, 0.5, rng(7))
        self.assertEqual([i.id for i, _ in first], [i.id for i, _ in second])

    def test_randomisation_faible_conserve_ordre(self):
        stream = MagicMock()
        stream.random.side_effect = [0.99, 0.5, 0.3, 0.999, 0.1]
        self.assertEqual(randomize(list('abcde'), 1e-6, stream), list('abcde'))

    def test_tirage_egal_a_un(self):
        stream = MagicMock()
        stream.random.side_effect = [1.0, 1.0, 1.0]
        self.assertEqual(randomize(list('abc'), 0.5, stream), ['c', 'b', 'a'])

    def test_orientations_par_hauteur(self):
        cube = Item('c', (2, 2, 2), tiltable=True)
        self.assertEqual(orientations_for(cube, 2), (Orientation(Tilt.NONE, False),))
        item = Item('a', (2, 3, 5), tiltable=True)
        self.assertEqual(orientations_for(item, 3), (Orientation(Tilt.ACROSS_X, False), Orientation(Tilt.ACROSS_X, True)))
        flat = Item('f', (2, 2, 5), tiltable=True)
        self.assertTrue(all(o.apply(flat.size)[2] == 2 for o in orientations_for(flat, 2)))

    def test_hauteur_irrealisable(self):
        with self.assertRaises(PackingException) as ctx:
            orientations_for(Item('a', (2, 3, 5)), 3)
        self.assertEqual(ctx.exception.error_code, 'HEIGHT_UNREALIZABLE')

    def test_liste_de_chargement(self):
        self.assertEqual(len(build_order([Item('a', (1, 2, 3))], SortingCriterion.CUMULATED_VOLUME, 0, rng())), 1)
        order = build_order([Item('a', (1, 2, 3), tiltable=True)], SortingCriterion.CUMULATED_VOLUME, 0, rng())
        self.assertEqual(len(order), 3)

    def test_groupes_identiques_consecutifs(self):
        items = [Item('a1', (1, 1, 4)), Item('b1', (2, 2, 4)), Item('a2', (1, 1, 4)), Item('b2', (2, 2, 4))]
        order = [item.id[0] for item, _ in build_order(items, SortingCriterion.HIGHEST_VOLUME, 0, rng())]
        self.assertEqual(order, ['b', 'b', 'a', 'a'])


# =============================================================================
# TESTS DE L'HEURISTIQUE D'INSERTION
# =============================================================================

class InsertionTest(SimpleTestCase):

    def test_sans_bord(self):
        self.assertEqual(adapt_uld(cuboid_uld('C', 100, 100, 50)), [])

    def test_cadres_du_bord(self):
        uld = cuboid_uld('C', 100, 100, 50, edge_width=10, edge_offset=10, substructure_allowed=True)
        frames = adapt_uld(uld)
        self.assertEqual(len(frames), 4)
        self.assertTrue(all(p.size[2] == 9 and not p.stackable for p in frames))
        with_sub = adapt_uld(uld, use_substructure=True)
        self.assertEqual(len(with_sub), 5)
        self.assertTrue(with_sub[-1].stackable)
        self.assertEqual(with_sub[-1].size[2], 10)

    def test_bord_de_hauteur_unitaire(self):
        uld = cuboid_uld('C', 100, 100, 50, edge_width=10, edge_offset=1, substructure_allowed=True)
        self.assertEqual(adapt_uld(uld), [])
        with_sub = adapt_uld(uld, use_substructure=True)
        self.assertEqual([p.size for p in with_sub], [(80, 80, 1)])

    def test_sous_structure_interdite(self):
        uld = cuboid_uld('C', 100, 100, 50, edge_width=10, edge_offset=10)
        with self.assertRaises(PackingException) as ctx:
            adapt_uld(uld, use_substructure=True)
        self.assertEqual(ctx.exception.error_code, 'SUBSTRUCTURE_NOT_ALLOWED')

    def test_aucun_colis(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        load = load_single_uld([], uld, SortingCriterion.CUMULATED_VOLUME, 0, False, rng(), CheckBudget(100))
        self.assertTrue(load.is_empty)
        _, store = prepare_state(uld, PackingParams(), AlgoParams(), 1.0, False)
        self.assertEqual(len(store), 1)

    def test_cube_unitaire(self):
        uld = cuboid_uld('U', 1, 1, 1, weight_capacity=10)
        load = load_single_uld([Item('a', (1, 1, 1))], uld, SortingCriterion.CUMULATED_VOLUME, 0, False,
                               rng(), CheckBudget(100))
        self.assertEqual(load.real_placements[0].position, (0, 0, 0))
        self.assertAlmostEqual(load.utilization, 1.0)

    def test_colis_au_point_deplace(self):
        load = load_single_uld([Item('a', (2, 2, 3), rotatable=False)], upper_tilt_uld(),
                               SortingCriterion.CUMULATED_VOLUME, 0, False, rng(), CheckBudget(100))
        self.assertEqual(load.real_placements[0].position, (0, 2, 0))


# =============================================================================
# TESTS DU SCORE ET DE LA RECHERCHE GLOUTONNE
# =============================================================================

class ScoringTest(SimpleTestCase):

    def setUp(self):
        self.uld = cuboid_uld('C', 200, 200, 200, weight_capacity=1000)

    def _load(self, x):
        return UldLoad(self.uld, (put('a', (10, 10, 10), (x, 95, 0), weight=10),))

    def test_centre_geometrique(self):
        self.assertEqual(cog_deviation(self._load(95), 0, 0.1), 0.0)
        self.assertEqual(cog_deviation(self._load(95), 1, 0.1), 0.0)

    def test_ecart_dans_la_tolerance(self):
        self.assertEqual(cog_deviation(self._load(103), 0, 0.1), 0.0)

    def test_ecart_hors_tolerance(self):
        self.assertAlmostEqual(cog_deviation(self._load(120), 0, 0.1), 0.25)

    def test_formule_du_score(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        load = UldLoad(uld, (put('a', (10, 10, 5), (0, 0, 0), weight=1),))
        result = score(load, [], {}, 1, PackingParams(weight_balance_importance=0.5))
        self.assertAlmostEqual(result.total, 0.75)

    def test_penalite_nulle(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        items = [Item('a', (1, 1, 1)), Item('b', (2, 2, 2))]
        result = score(UldLoad(uld, ()), items, {'a': 2, 'b': 2}, 2, PackingParams(weight_balance_importance=0.5))
        self.assertEqual(result.penalty, 0)
        self.assertAlmostEqual(result.total, 0.5)

    def test_penalite_maximale(self):
        uld = cuboid_uld('C', 10, 10, 10, weight_capacity=10)
        result = score(UldLoad(uld, ()), [Item('a', (1, 1, 1))], {'a': 0}, 1, PackingParams())
        self.assertEqual(result.penalty, 1)


class RgsTest(SimpleTestCase):

    def test_plan_des_iterations(self):
        plain = cuboid_uld('C', 10, 10, 10)
        self.assertEqual(sum(n for _, _, n in iteration_plan(plain, AlgoParams(max_rgs_iters=12))), 12)
        self.assertEqual(len(iteration_plan(plain, AlgoParams())), 5)
        sub = cuboid_uld('S', 100, 100, 50, edge_width=10, edge_offset=10, substructure_allowed=True)
        self.assertEqual(len(iteration_plan(sub, AlgoParams())), 10)

    def test_instance_deterministe(self):
        uld = cuboid_uld('C', 6, 2, 2, weight_capacity=10)
        items = [Item(str(k), (2, 2, 2)) for k in range(3)]
        load = run_rgs(items, uld, PackingParams(), AlgoParams(min_rgs_iters=1, max_rgs_iters=10), rng())
        self.assertEqual(len(load.items), 3)
        self.assertEqual(load.iterations, 10)
        self.assertEqual(load.criterion, SortingCriterion.STACKABILITY_CUMULATED.value)
        self.assertEqual({p.position for p in load.real_placements}, {(0, 0, 0), (2, 0, 0), (4, 0, 0)})

    def test_meme_graine_meme_chargement(self):
        uld = cuboid_uld('C', 10, 8, 6, weight_capacity=100)
        items = [Item(str(k), (2 + k % 3, 2, 1 + k % 2), weight=k) for k in range(12)]
        first = run_rgs(items, uld, PackingParams(), FAST, rng(3))
        second = run_rgs(items, uld, PackingParams(), FAST, rng(3))
        self.assertEqual(first.placements, second.placements)


# =============================================================================
# TESTS DE LA FERMETURE DES TROUS
# =============================================================================

class HoleClosingTest(SimpleTestCase):

    def setUp(self):
        self.uld = cuboid_uld('C', 20, 4, 10, weight_capacity=100)

    def test_chargement_jointif(self):
        load = UldLoad(self.uld, (put('a', (10, 4, 4), (0, 0, 0)), put('b', (10, 4, 4), (10, 0, 0))))
        self.assertEqual(find_holes(load), [])

    def test_trou_vers_le_colis_suivant(self):
        load = UldLoad(self.uld, (put('a', (4, 4, 4), (0, 0, 0)), put('b', (4, 4, 4), (10, 0, 0))))
        holes = {(h.index, h.direction) for h in find_holes(load)}
        self.assertEqual(holes, {(0, Direction.PLUS_X), (1, Direction.MINUS_X)})

    def test_espace_sans_colis_bloquant(self):
        load = UldLoad(self.uld, (put('a', (4, 4, 4), (0, 0, 0)),))
        self.assertEqual(find_holes(load), [])

    def test_glissement_jusqu_au_colis_bloquant(self):
        load = UldLoad(self.uld, (put('a', (4, 4, 4), (0, 0, 0)), put('b', (4, 4, 4), (10, 0, 0))))
        moved, offset = slide(load, [0], Direction.PLUS_X, PackingParams())
        self.assertEqual(offset, 6)
        self.assertEqual(moved.placements[0].position, (6, 0, 0))

    def test_ensemble_coince(self):
        load = UldLoad(self.uld, (put('a', (10, 4, 4), (0, 0, 0)), put('b', (10, 4, 4), (10, 0, 0))))
        moved, offset = slide(load, [0], Direction.PLUS_X, PackingParams())
        self.assertEqual(offset, 0)
        self.assertIs(moved, load)

    def test_fermeture_complete(self):
        load = UldLoad(self.uld, (put('a', (4, 4, 4), (0, 0, 0)), put('b', (4, 4, 4), (10, 0, 0))))
        closed = close_holes(load, PackingParams())
        self.assertEqual(find_holes(closed), [])
        self.assertEqual(validate_load(closed, PackingParams()), [])


class MovableSetTest(SimpleTestCase):
    """Ensemble des colis déplacés ensemble."""

    def setUp(self):
        uld = cuboid_uld('C', 20, 4, 10, weight_capacity=100)
        self.load = UldLoad(uld, (
            put('A', (4, 4, 4), (0, 0, 0)),
            put('B', (4, 4, 5), (4, 0, 0)),
            put('C', (4, 4, 2), (0, 0, 4)),
            put('D', (8, 4, 2), (0, 0, 6)),
        ))

    def test_colis_isole(self):
        uld = cuboid_uld('C', 20, 4, 10, weight_capacity=100)
        load = UldLoad(uld, (put('a', (4, 4, 4), (0, 0, 0)),))
        self.assertEqual(movable_set(load, 0, 10), [0])

    def test_ensemble_depuis_le_plancher(self):
        self.assertEqual(movable_set(self.load, 0, 10), [0, 1, 2, 3])

    def test_ensemble_vide_si_colis_plus_bas(self):
        self.assertEqual(movable_set(self.load, 2, 10), [])

    def test_arret_au_bord_non_gerbable(self):
        uld = cuboid_uld('C', 30, 4, 10, weight_capacity=100)
        load = UldLoad(uld, (
            put('P', (10, 4, 2), (0, 0, 0)),
            put('N', (6, 4, 2), (10, 0, 0), stackable=False),
            put('E', (4, 4, 6), (20, 0, 0)),
            put('T', (4, 4, 2), (0, 0, 2)),
        ))
        self.assertEqual(movable_set(load, 3, 10), [3])
        moved, offset = slide(load, [3], Direction.PLUS_X, PackingParams())
        self.assertEqual(offset, 6)
        self.assertEqual(moved.placements[3].position, (6, 0, 2))


# =============================================================================
# TESTS DU CHARGEMENT DE FLOTTE
# =============================================================================

class FleetTest(SimpleTestCase):

    def setUp(self):
        self.small = UldGroup(cuboid_uld('S', 4, 4, 4, weight_capacity=10))
        self.large = UldGroup(cuboid_uld('L', 10, 10, 10, weight_capacity=100))

    def test_colis_unitaire(self):
        self.assertTrue(item_fits_group(Item('a', (1, 1, 1)), self.small, PackingParams()))

    def test_colis_trop_long(self):
        item = Item('a', (11, 1, 1), rotatable=False)
        table = build_fit_table([item], [self.small, self.large], PackingParams())
        self.assertEqual(table['a'], set())

    def test_capacite_massique_par_groupe(self):
        item = Item('a', (1, 1, 1), weight=50)
        table = build_fit_table([item], [self.small, self.large], PackingParams())
        self.assertEqual(table['a'], {1})

    def test_un_seul_groupe(self):
        items = [Item('a', (1, 1, 1))]
        self.assertEqual(select_next_uld(items, [self.small], {'a': {0}}), 0)

    def test_colis_contraint_impose_le_groupe(self):
        items = [Item('big', (3, 3, 3)), Item('x', (2, 2, 2)), Item('y', (2, 2, 2))]
        table = {'big': {0}, 'x': {0, 1}, 'y': {0, 1}}
        self.assertEqual(select_next_uld(items, [self.small, self.large], table), 0)

    def test_egalite_vers_le_plus_grand_volume(self):
        items = [Item('a', (1, 1, 1))]
        self.assertEqual(select_next_uld(items, [self.small, self.large], {'a': {0, 1}}), 1)

    def test_aucun_groupe(self):
        with self.assertRaises(PackingException) as ctx:
            select_next_uld([Item('a', (1, 1, 1))], [self.small], {'a': set()})
        self.assertEqual(ctx.exception.error_code, 'NO_FITTING_ULD')

    def test_tout_dans_une_uld(self):
        items = [Item(str(k), (2, 2, 2)) for k in range(4)]
        solution = load_fleet(items, [self.small], PackingParams(), FAST)
        self.assertEqual(len(solution.loads), 1)
        self.assertEqual(solution.unloaded, ())

    def test_colis_impossible_non_charge(self):
        items = [Item('ok', (1, 1, 1)), Item('huge', (50, 50, 50))]
        solution = load_fleet(items, [self.small, self.large], PackingParams(), FAST)
        self.assertEqual([i.id for i in solution.unloaded], ['huge'])
        self.assertEqual(len(solution.loaded_items), 1)

    def test_une_uld_par_type(self):
        items = [Item(str(k), (4, 4, 4)) for k in range(3)]
        solution = load_fleet(items, [UldGroup(self.small.uld, 1)], PackingParams(), FAST)
        self.assertEqual(len(solution.loads), 1)
        self.assertEqual(len(solution.unloaded), 2)

    def test_rechargement_dans_une_uld_plus_petite(self):
        items = [Item('a', (2, 2, 2))]
        solution = load_fleet(items, [self.small, self.large], PackingParams(), FAST)
        self.assertEqual([load.uld.id for load in solution.loads], ['S'])


# =============================================================================
# TESTS DU VALIDATEUR INDÉPENDANT
# =============================================================================

class ValidationTest(SimpleTestCase):

    def setUp(self):
        self.uld = cuboid_uld('C', 10, 8, 6, weight_capacity=100)
        self.items = [Item(str(k), (2 + k % 3, 2, 1 + k % 2), weight=1 + k) for k in range(10)]
        self.instance = Instance('v', tuple(self.items), (UldGroup(self.uld),), PackingParams(), FAST)

    def test_sortie_du_solveur_valide(self):
        solution = load_fleet(self.items, self.instance.groups, PackingParams(), FAST)
        report = validate_solution(solution, self.instance)
        self.assertTrue(report.ok, report.as_dict())

    def test_collision_signalee(self):
        load = UldLoad(self.uld, (put('0', (2, 2, 1), (0, 0, 0)), put('1', (3, 2, 2), (1, 0, 0))))
        kinds = {v.kind for v in validate_load(load, PackingParams())}
        self.assertIn('collision', kinds)

    def test_ecart_de_centre_de_gravite_doux(self):
        load = UldLoad(self.uld, (put('0', (2, 2, 1), (0, 0, 0), weight=5),))
        violations = validate_load(load, PackingParams())
        self.assertTrue(violations)
        self.assertTrue(all(v.kind == 'cog' and v.severity.value == 'soft' for v in violations))

    def test_colis_manquant(self):
        solution = load_fleet(self.items[:3], self.instance.groups, PackingParams(), FAST)
        report = validate_solution(solution, self.instance)
        self.assertIn('missing_item', {v.kind for v in report.hard})


# =============================================================================
# TESTS DE LA CONFIGURATION ET DU SERVICE
# =============================================================================

class ConfigTest(SimpleTestCase):
    """Paramètres par défaut du fichier YAML et surcharges --param"""

    def setUp(self):
        reset_packing_config()
        self.config = get_packing_config()

    def test_valeurs_par_defaut(self):
        self.assertEqual(self.config.packing_defaults, PackingParams())
        self.assertEqual(self.config.algo_defaults.max_rgs_iters, 500)

    def test_surcharges_typees(self):
        overrides = parse_overrides(['max_rgs_iters=50', 'min_item_overlap=0.5', 'ep_sort_order=xyz', 'use_grid=false'])
        self.assertEqual(overrides, {'max_rgs_iters': 50, 'min_item_overlap': 0.5, 'ep_sort_order': 'xyz', 'use_grid': False})
        self.assertEqual(self.config.packing_params(overrides).min_item_overlap, 0.5)
        algo = self.config.algo_params(overrides)
        self.assertEqual(algo.sort_axes, (0, 1, 2))
        self.assertEqual(algo.variant, 'no_grid')

    def test_surcharge_mal_formee(self):
        with self.assertRaises(PackingException):
            parse_overrides(['max_rgs_iters'])

    def test_parametre_inconnu(self):
        with self.assertRaises(PackingException) as ctx:
            self.config.algo_params({'vitesse': 3})
        self.assertEqual(ctx.exception.details['unknown'], ['vitesse'])

    def test_variantes(self):
        self.assertFalse(self.config.algo_params(variant='no_blocking').use_blocking)
        mimic = self.config.algo_params(variant='crainic_mimic')
        self.assertTrue(mimic.crainic_mimic)
        self.assertEqual(mimic.variant, 'crainic_mimic')
        with self.assertRaises(PackingException):
            self.config.algo_params(variant='turbo')

    @override_settings(ULDPACK_CONFIG='/nonexistent/uldpack.yaml')
    def test_fichier_absent(self):
        reset_packing_config()
        self.assertEqual(get_packing_config().algo_defaults, AlgoParams())
        reset_packing_config()


class PackingServiceTest(SimpleTestCase):

    def setUp(self):
        uld = cuboid_uld('C', 10, 8, 6, weight_capacity=100)
        items = tuple(Item(str(k), (2 + k % 3, 2, 1 + k % 2), weight=k) for k in range(8))
        self.instance = Instance('svc', items, (UldGroup(uld),), PackingParams(), FAST)
        self.service = PackingService()

    def test_graine_et_variante(self):
        packing, algo = self.service.resolve_params(self.instance, {'max_padding_height': 0}, 'no_moving', 9)
        self.assertEqual(packing.max_padding_height, 0)
        self.assertEqual(algo.rng_seed, 9)
        self.assertFalse(algo.use_moving)

    def test_resolution(self):
        result = self.service.solve(self.instance, seed=2)
        self.assertTrue(result.report.ok)
        self.assertEqual(result.instance.algo.rng_seed, 2)
        self.assertEqual(len(result.solution.loaded_items) + len(result.solution.unloaded), 8)

    def test_resolution_reproductible(self):
        first = self.service.solve(self.instance, seed=5).solution
        second = self.service.solve(self.instance, seed=5).solution
        self.assertEqual([l.placements for l in first.loads], [l.placements for l in second.loads])

    def test_service_global(self):
        self.assertIs(get_packing_service(), get_packing_service())
