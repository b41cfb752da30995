"""
TESTS POUR L'APPLICATION INSTANCES - ULDPACK

Tests pour:
1. Format texte des instances de référence
2. Schéma d'instance JSON
3. Catalogue des ULD
4. Export des plans (JSON, CSV, OBJ)
5. Commandes convert, solve et validate
"""
import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from instances.catalog import TEMPLATES, cuboid_uld, load_catalog, prism_uld, profile_for
from instances.exporters import export_scene, plan_as_dict, read_plan, write_plan, write_plan_csv
from instances.parsers import BrBoxType, br_item_flags, parse_br, parse_br_problems, write_br
from instances.serializers import instance_as_dict, parse_instance_json
from instances.services import discover, read_instances
from packing.domain import (IDENTITY, AlgoParams, Instance, Item, PackingParams, Placement, Solution, UldGroup,
                            UldLoad)
from packing.exceptions import PackingException
from packing.fleet import load_fleet
from packing.validation import validate_solution

BR_SAMPLE = """ 2
 1 2502505
 587 233 220
 2
 1 108 0 76 0 30 1 40
 2 110 0 43 1 25 1 33
 2 7
 10 10 10
 1
 1 2 1 3 1 4 1 5
"""

CUBE_VERTICES = [[0, 0, 0], [10, 0, 0], [10, 10, 0], [0, 10, 0],
                 [0, 0, 10], [10, 0, 10], [10, 10, 10], [0, 10, 10]]
CUBE_FACETS = [[0, 1, 2, 3], [4, 5, 6, 7], [0, 1, 5, 4], [2, 3, 7, 6], [0, 3, 7, 4], [1, 2, 6, 5]]


def minimal_instance(**changes):
    data = {
        'schema_version': '1.0',
        'name': 'mini',
        'items': [{'id': 'a', 'size': [2, 2, 2]}, {'id': 'b', 'size': [3, 2, 1], 'weight': 4}],
        'ulds': [{'id': 'U', 'vertices': CUBE_VERTICES, 'facets': CUBE_FACETS, 'weight_capacity': 100}],
        'algo': {'min_rgs_iters': 1, 'max_rgs_iters': 5},
    }
    data.update(changes)
    return data


def error_paths(ctx):
    return [error['path'] for error in ctx.exception.details['errors']]


# =============================================================================
# TESTS DU FORMAT TEXTE DE RÉFÉRENCE
# =============================================================================

class BrParserTest(SimpleTestCase):
    """Tests de lecture du format texte orienté lignes"""

    def test_nombre_de_problemes_et_de_colis(self):
        problems = parse_br_problems(BR_SAMPLE)
        self.assertEqual(len(problems), 2)
        self.assertEqual(problems[0].item_count, 73)
        self.assertEqual(problems[0].container, (587, 233, 220))
        self.assertEqual(problems[1].item_count, 5)

    def test_drapeaux_de_verticalite(self):
        self.assertEqual(br_item_flags(BrBoxType(1, (108, 76, 30), (False, False, True), 1)), ((108, 76, 30), True, False))
        self.assertEqual(br_item_flags(BrBoxType(1, (110, 43, 25), (False, True, True), 1)), ((110, 43, 25), True, False))
        self.assertEqual(br_item_flags(BrBoxType(1, (5, 6, 7), (True, False, False), 1)), ((6, 7, 5), True, False))
        self.assertEqual(br_item_flags(BrBoxType(1, (2, 3, 4), (True, True, True), 1)), ((2, 3, 4), True, True))

    def test_instances(self):
        instances = parse_br(BR_SAMPLE)
        self.assertEqual([i.name for i in instances], ['br-1', 'br-2'])
        first = instances[0]
        self.assertEqual(len(first.items), 73)
        self.assertEqual(first.items[0].id, '1-1')
        self.assertEqual(first.items[40].id, '2-1')
        self.assertEqual(first.groups[0].count, 1)
        self.assertEqual(first.groups[0].uld.bounding_box, (587, 233, 220))
        self.assertTrue(all(item.tiltable for item in instances[1].items))

    def test_ligne_mal_formee(self):
        with self.assertRaises(PackingException) as ctx:
            parse_br_problems(" 1\n 1 7\n 10 10 x\n 1\n 1 2 1 3 1 4 1 5\n")
        self.assertEqual(ctx.exception.error_code, 'MALFORMED_LINE')
        self.assertEqual(ctx.exception.details['line'], 3)
        self.assertIn('ligne 3', str(ctx.exception))

    def test_problemes_manquants(self):
        with self.assertRaises(PackingException) as ctx:
            parse_br_problems(" 3\n 1 7\n 10 10 10\n 1\n 1 2 1 3 1 4 1 5\n")
        self.assertEqual(ctx.exception.error_code, 'COUNT_MISMATCH')

    def test_contenu_en_trop(self):
        with self.assertRaises(PackingException) as ctx:
            parse_br_problems(BR_SAMPLE + " 9 9\n")
        self.assertEqual(ctx.exception.error_code, 'COUNT_MISMATCH')

    def test_aucune_dimension_verticale(self):
        with self.assertRaises(PackingException) as ctx:
            parse_br_problems(" 1\n 1 7\n 10 10 10\n 1\n 1 2 0 3 0 4 0 5\n")
        self.assertEqual(ctx.exception.error_code, 'MALFORMED_LINE')

    def test_ecriture_relue(self):
        problems = parse_br_problems(BR_SAMPLE)
        self.assertEqual(parse_br_problems(write_br(problems)), problems)


# =============================================================================
# TESTS DU SCHÉMA JSON
# =============================================================================

class InstanceJsonTest(SimpleTestCase):
    """Tests du schéma d'instance JSON"""

    def test_instance_minimale(self):
        instance = parse_instance_json(json.dumps(minimal_instance()))
        self.assertEqual(instance.name, 'mini')
        self.assertEqual([i.id for i in instance.items], ['a', 'b'])
        self.assertTrue(instance.items[0].rotatable)
        self.assertFalse(instance.items[0].tiltable)
        self.assertEqual(instance.items[1].weight, 4)
        self.assertIsNone(instance.groups[0].count)
        self.assertEqual(instance.algo.max_rgs_iters, 5)
        # valeurs du fichier de configuration
        self.assertEqual(instance.packing.min_item_overlap, 0.9)

    def test_uld_a_deux_facettes_inclinees(self):
        pmc = load_catalog()['PMC']
        source = Instance('pmc', (Item('a', (10, 10, 10)),), (UldGroup(pmc, 2),))
        instance = parse_instance_json(json.dumps(instance_as_dict(source)))
        uld = instance.groups[0].uld
        self.assertEqual(len(uld.vertices), 12)
        self.assertEqual(len(uld.facets), 8)
        self.assertEqual(len(uld.tilted_planes), 2)
        self.assertEqual(instance.groups[0].count, 2)
        self.assertEqual(uld.cog_tolerance, pmc.cog_tolerance)

    def test_dimension_nulle(self):
        data = minimal_instance(items=[{'id': 'a', 'size': [0, 1, 1]}])
        with self.assertRaises(PackingException) as ctx:
            parse_instance_json(json.dumps(data))
        self.assertEqual(ctx.exception.error_code, 'SCHEMA_VIOLATION')
        self.assertTrue(any(p.startswith('items[0].size') for p in error_paths(ctx)))

    def test_uld_non_convexe(self):
        vertices = [list(v) for v in CUBE_VERTICES]
        vertices[6] = [4, 4, 4]
        data = minimal_instance(ulds=[{'id': 'U', 'vertices': vertices, 'facets': CUBE_FACETS, 'weight_capacity': 1}])
        with self.assertRaises(PackingException) as ctx:
            parse_instance_json(json.dumps(data))
        self.assertIn('ulds[0].geometry', error_paths(ctx))

    def test_identifiants_dupliques(self):
        data = minimal_instance(items=[{'id': 'a', 'size': [1, 1, 1]}, {'id': 'a', 'size': [2, 2, 2]}])
        with self.assertRaises(PackingException) as ctx:
            parse_instance_json(json.dumps(data))
        self.assertIn('items[1].id', error_paths(ctx))

    def test_disponibilite(self):
        data = minimal_instance()
        data['ulds'][0]['availability'] = 0
        with self.assertRaises(PackingException) as ctx:
            parse_instance_json(json.dumps(data))
        self.assertIn('ulds[0].availability', error_paths(ctx))

    def test_aucune_uld(self):
        with self.assertRaises(PackingException) as ctx:
            parse_instance_json(json.dumps(minimal_instance(ulds=[])))
        self.assertIn('ulds', error_paths(ctx))

    def test_version_inconnue(self):
        with self.assertRaises(PackingException) as ctx:
            parse_instance_json(json.dumps(minimal_instance(schema_version='9.9')))
        self.assertIn('schema_version', error_paths(ctx))

    def test_json_illisible(self):
        with self.assertRaises(PackingException) as ctx:
            parse_instance_json('{"name": ')
        self.assertEqual(error_paths(ctx), ['$'])


# =============================================================================
# TESTS DU CATALOGUE
# =============================================================================

class CatalogTest(SimpleTestCase):

    def test_six_types(self):
        catalog = load_catalog()
        self.assertEqual(list(catalog), ['AKE', 'ALF', 'AMJ', 'PAG', 'PLA', 'PMC'])

    def test_facettes_critiques(self):
        catalog = load_catalog()
        self.assertEqual(len(catalog['AKE'].tilted_planes), 1)
        self.assertEqual(catalog['AKE'].critical_planes, ())
        self.assertEqual(len(catalog['ALF'].tilted_planes), 2)
        self.assertEqual(len(catalog['PLA'].critical_planes), 1)
        self.assertEqual(len(catalog['PMC'].tilted_planes), 2)
        # seule la facette haute côté y = 0 permet le déplacement en +y
        self.assertEqual(len(catalog['PMC'].critical_planes), 1)
        self.assertEqual(catalog['AMJ'].tilted_planes, ())

    def test_sous_structure(self):
        catalog = load_catalog()
        self.assertTrue(catalog['PMC'].substructure_allowed)
        self.assertFalse(catalog['AKE'].substructure_allowed)

    def test_gabarits_convexes(self):
        for template in TEMPLATES:
            profile = profile_for(template, 20, 20, 5, 5)
            uld = prism_uld(template, 30, profile, 100)
            self.assertEqual(len(uld.planes), len(profile) + 2, template)
            self.assertEqual(uld.bounding_box, (30, 20, 20), template)

    def test_gabarit_inconnu(self):
        with self.assertRaises(PackingException) as ctx:
            profile_for('hexagon', 10, 10)
        self.assertEqual(ctx.exception.error_code, 'INVALID_ULD')


# =============================================================================
# TESTS DES EXPORTS
# =============================================================================

class ExportTest(SimpleTestCase):

    def setUp(self):
        # Petite instance résolue une fois par test
        self.uld = cuboid_uld('U', 10, 10, 10, weight_capacity=100)
        items = tuple(Item(f"i{k}", (2 + k % 3, 2, 2), weight=k) for k in range(6))
        self.instance = Instance('exp', items, (UldGroup(self.uld),), PackingParams(),
                                 AlgoParams(min_rgs_iters=1, max_rgs_iters=5, rng_seed=3))
        self.solution = load_fleet(items, self.instance.groups, self.instance.packing, self.instance.algo)

    def test_solution_vide(self):
        empty = Instance('vide', (), (UldGroup(self.uld),))
        plan = plan_as_dict(Solution(), empty)
        self.assertEqual(plan['loads'], [])
        self.assertEqual(plan['summary']['uld_count'], 0)
        self.assertEqual(plan['summary']['utilization'], 0.0)
        self.assertTrue(plan['summary']['valid'])

    def test_plan_deterministe(self):
        again = load_fleet(self.instance.items, self.instance.groups, self.instance.packing, self.instance.algo)
        self.assertEqual(write_plan(self.solution, self.instance), write_plan(again, self.instance))

    def test_plan_relu_et_revalide(self):
        text = write_plan(self.solution, self.instance)
        plan = json.loads(text)
        self.assertTrue(plan['summary']['valid'])
        self.assertEqual(plan['seed'], 3)
        restored = read_plan(text, self.instance)
        self.assertTrue(validate_solution(restored, self.instance).ok)
        self.assertEqual(sorted(i.id for i in restored.loaded_items), sorted(i.id for i in self.solution.loaded_items))

    def test_colis_inconnu_signale(self):
        plan = json.loads(write_plan(self.solution, self.instance))
        plan['unloaded'].append('ghost')
        restored = read_plan(json.dumps(plan), self.instance)
        kinds = {v.kind for v in validate_solution(restored, self.instance).hard}
        self.assertIn('unknown_item', kinds)

    def test_plan_illisible(self):
        with self.assertRaises(PackingException) as ctx:
            read_plan('{"loads": [{"uld": "U"}]}', self.instance)
        self.assertEqual(ctx.exception.error_code, 'SCHEMA_VIOLATION')

    def test_csv(self):
        lines = write_plan_csv(self.solution).strip().splitlines()
        self.assertTrue(lines[0].startswith('load,uld,item,x,y,z'))
        self.assertEqual(len(lines) - 1, len(self.solution.loaded_items))

    def test_scene_obj(self):
        load = UldLoad(self.uld, (
            Placement(Item('a', (2, 2, 2)), IDENTITY, (0, 0, 0)),
            Placement(Item('b', (2, 2, 2)), IDENTITY, (2, 0, 0)),
        ))
        scene = export_scene(Solution((load,)))
        vertices = [line for line in scene.splitlines() if line.startswith('v ')]
        faces = [line for line in scene.splitlines() if line.startswith('f ')]
        self.assertEqual(len(vertices), 24)
        self.assertEqual(len(faces), 18)
        self.assertIn('f 17 19 20 18', faces)


# =============================================================================
# TESTS DES COMMANDES
# =============================================================================

class CommandTest(SimpleTestCase):
    """Tests des commandes de gestion"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        self.instance_path = self.dir / 'mini.json'
        self.instance_path.write_text(json.dumps(minimal_instance()), encoding='utf-8')

    def tearDown(self):
        self.tmp.cleanup()

    def test_lecture_selon_extension(self):
        br_path = self.dir / 'sample.txt'
        br_path.write_text(BR_SAMPLE, encoding='utf-8')
        self.assertEqual([i.name for i in read_instances(br_path)], ['sample-1', 'sample-2'])
        self.assertEqual(len(read_instances(self.instance_path)), 1)
        self.assertEqual(discover(self.dir), [self.instance_path, br_path])

    def test_repertoire_vide(self):
        with self.assertRaises(PackingException) as ctx:
            discover(self.dir / 'absent')
        self.assertEqual(ctx.exception.error_code, 'MISSING_INSTANCES')

    def test_convert_br(self):
        source = self.dir / 'sample.txt'
        source.write_text(BR_SAMPLE, encoding='utf-8')
        out = self.dir / 'converted'
        call_command('convert', str(source), '--from', 'br', '--out', str(out), stdout=StringIO())
        self.assertEqual(sorted(p.name for p in out.iterdir()), ['sample-1.json', 'sample-2.json'])
        instance = parse_instance_json((out / 'sample-1.json').read_text(encoding='utf-8'))
        self.assertEqual(len(instance.items), 73)
        self.assertEqual(instance.groups[0].count, 1)

    def test_convert_csv(self):
        source = self.dir / 'colis.csv'
        source.write_text("id,l,w,h,weight\nc1,40,30,20,5\nc2,50,50,50,10\n", encoding='utf-8')
        out = self.dir / 'inst.json'
        call_command('convert', str(source), '--from', 'items-csv', '--uld', 'AKE:2', '--uld', 'PMC',
                     '--out', str(out), stdout=StringIO())
        instance = parse_instance_json(out.read_text(encoding='utf-8'))
        self.assertEqual([i.id for i in instance.items], ['c1', 'c2'])
        self.assertEqual([(g.uld.id, g.count) for g in instance.groups], [('AKE', 2), ('PMC', None)])

    def test_convert_csv_sans_uld(self):
        source = self.dir / 'colis.csv'
        source.write_text("id,l,w,h\nc1,4,3,2\n", encoding='utf-8')
        with self.assertRaises(CommandError):
            call_command('convert', str(source), '--from', 'items-csv', '--out', str(self.dir / 'x.json'))

    def test_solve_puis_validate(self):
        plan_path = self.dir / 'plan.json'
        call_command('solve', str(self.instance_path), '--seed', '1', '--out', str(plan_path),
                     stdout=StringIO(), stderr=StringIO())
        plan = json.loads(plan_path.read_text(encoding='utf-8'))
        self.assertEqual(plan['summary']['loaded_items'], 2)
        self.assertTrue(plan['summary']['valid'])

        out = StringIO()
        call_command('validate', str(self.instance_path), str(plan_path), stdout=out)
        self.assertIn('Plan valide', out.getvalue())

        # deux colis superposés au même endroit
        placements = [p for p in plan['loads'][0]['placements'] if not p['dummy']]
        placements[1]['position'] = placements[0]['position']
        plan_path.write_text(json.dumps(plan), encoding='utf-8')
        out = StringIO()
        call_command('validate', str(self.instance_path), str(plan_path), stdout=out)
        self.assertIn('Plan invalide', out.getvalue())
        self.assertIn('collision', out.getvalue())

    def test_solve_formats(self):
        out = StringIO()
        call_command('solve', str(self.instance_path), '--format', 'obj', stdout=out, stderr=StringIO())
        self.assertTrue(out.getvalue().startswith('# uldpack scene'))
        out = StringIO()
        call_command('solve', str(self.instance_path), '--format', 'csv', '--no-grid', stdout=out, stderr=StringIO())
        self.assertEqual(len(out.getvalue().strip().splitlines()), 3)

    def test_solve_colis_non_charges(self):
        data = minimal_instance(items=[{'id': 'big', 'size': [20, 20, 20]}])
        self.instance_path.write_text(json.dumps(data), encoding='utf-8')
        with self.assertRaises(CommandError) as ctx:
            call_command('solve', str(self.instance_path), stdout=StringIO(), stderr=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_solve_instance_absente(self):
        with self.assertRaises(CommandError):
            call_command('solve', str(self.dir / 'absent.json'), stdout=StringIO(), stderr=StringIO())
