"""
TESTS POUR L'APPLICATION BENCHMARKS - ULDPACK

Tests pour:
1. Préparation des instances par les suites
2. Tableaux agrégés (pandas)
3. Exécution d'une suite et enregistrement en base
4. Commande bench
"""
import tempfile
from io import StringIO
from pathlib import Path

import pandas as pd
from django.core.management import call_command
from django.test import SimpleTestCase, TestCase

from benchmarks.admin import utilization_badge
from benchmarks.models import BenchmarkResult, BenchmarkRun
from benchmarks.services import (BenchmarkService, ablation_table, attribution_table, summary_table,
                                 type_count)
from benchmarks.suites import SUITES, get_suite
from instances.catalog import cuboid_uld
from packing.domain import VARIANTS, Instance, Item, UldGroup
from packing.exceptions import PackingException

BENCH_SAMPLE = """ 2
 1 1
 10 10 10
 1
 1 5 1 5 1 5 1 8
 2 2
 10 10 10
 2
 1 5 1 5 1 5 1 4
 2 2 1 3 1 4 1 6
"""

FAST = {'min_rgs_iters': 1, 'max_rgs_iters': 3}


def results_frame():
    return pd.DataFrame([
        {'instance': 'a1', 'group': 'a', 'variant': 'default', 'uld_count': 2, 'utilization': 0.8,
         'elapsed': 1.0, 'cog_violations': 1, 'substructure_count': 0, 'criteria': ['random', 'cumulated_volume']},
        {'instance': 'a2', 'group': 'a', 'variant': 'default', 'uld_count': 1, 'utilization': 0.6,
         'elapsed': 3.0, 'cog_violations': 0, 'substructure_count': 1, 'criteria': ['random+sub']},
        {'instance': 'b1', 'group': 'b', 'variant': 'default', 'uld_count': 1, 'utilization': 0.7,
         'elapsed': 2.0, 'cog_violations': 0, 'substructure_count': 0, 'criteria': ['random']},
    ])


# =============================================================================
# TESTS DES SUITES
# =============================================================================

class SuiteTest(SimpleTestCase):

    def setUp(self):
        uld = cuboid_uld('U', 100, 100, 50, weight_capacity=100, edge_width=5, edge_offset=5,
                         substructure_allowed=True)
        self.instance = Instance('s', (Item('a', (1, 1, 1)),), (UldGroup(uld, 3),))

    def test_suite_br_sans_bord(self):
        prepared = SUITES['br'].prepare(self.instance)
        uld = prepared.groups[0].uld
        self.assertEqual((uld.edge_width, uld.edge_offset), (0, 0))
        self.assertFalse(uld.substructure_allowed)
        self.assertEqual(prepared.groups[0].count, 3)

    def test_suites_adaptees(self):
        unlimited = SUITES['adapted_unlimited'].prepare(self.instance)
        single = SUITES['adapted_1uld'].prepare(self.instance)
        self.assertIsNone(unlimited.groups[0].count)
        self.assertEqual(single.groups[0].count, 1)
        self.assertEqual(single.groups[0].uld.edge_width, 10)
        self.assertTrue(single.groups[0].uld.substructure_allowed)

    def test_ablation_une_uld_par_type(self):
        suite = get_suite('ablation')
        prepared = suite.prepare(self.instance)
        self.assertEqual(prepared.groups[0].count, 1)
        self.assertEqual(prepared.groups[0].uld.edge_width, 10)
        self.assertEqual(suite.variants, VARIANTS)

    def test_suite_inconnue(self):
        with self.assertRaises(PackingException) as ctx:
            get_suite('inconnue')
        self.assertEqual(ctx.exception.error_code, 'INVALID_PARAMETER')

    def test_nombre_de_types(self):
        items = (Item('a', (1, 2, 3)), Item('b', (3, 2, 1)), Item('c', (1, 1, 1)))
        self.assertEqual(type_count(Instance('t', items, self.instance.groups)), 2)


# =============================================================================
# TESTS DES TABLEAUX
# =============================================================================

class TableTest(SimpleTestCase):

    def test_tableau_par_groupe(self):
        table = summary_table(results_frame())
        self.assertEqual(list(table['group']), ['a', 'b', 'total'])
        group_a = table.iloc[0]
        self.assertAlmostEqual(group_a['ū'], 0.7)
        self.assertAlmostEqual(group_a['u^min'], 0.6)
        self.assertAlmostEqual(group_a['t^max'], 3.0)
        self.assertEqual(group_a['|G|'], 3)
        total = table.iloc[-1]
        self.assertEqual(total['instances'], 3)
        self.assertEqual(total['G^vio'], 1)
        self.assertEqual(total['#sub.'], 1)

    def test_tableau_vide(self):
        self.assertTrue(summary_table(pd.DataFrame()).empty)

    def test_attribution_des_criteres(self):
        table = attribution_table(results_frame())
        self.assertEqual(table.iloc[0]['criterion'], 'random')
        self.assertEqual(table.iloc[0]['uld_count'], 2)
        self.assertEqual(int(table['uld_count'].sum()), 4)

    def test_ablation_par_groupe(self):
        slower = results_frame().assign(variant='no_grid')
        slower.loc[slower['group'] == 'a', 'elapsed'] *= 2
        slower.loc[slower['group'] == 'b', 'utilization'] = 0.35
        table = ablation_table(pd.concat([results_frame(), slower], ignore_index=True))
        self.assertEqual(list(table['group'].unique()), ['a', 'b', 'total'])
        table = table.set_index(['group', 'variant'])
        self.assertAlmostEqual(table.loc[('a', 'default'), 't_ratio'], 1.0)
        self.assertAlmostEqual(table.loc[('a', 'no_grid'), 't_ratio'], 2.0)
        self.assertAlmostEqual(table.loc[('a', 'no_grid'), 'u_ratio'], 1.0)
        self.assertAlmostEqual(table.loc[('b', 'no_grid'), 't_ratio'], 1.0)
        self.assertAlmostEqual(table.loc[('b', 'no_grid'), 'u_ratio'], 0.5)
        self.assertAlmostEqual(table.loc[('total', 'no_grid'), 't_ratio'], 5 / 3)
        self.assertAlmostEqual(table.loc[('total', 'no_grid'), 'u_ratio'], (0.8 + 0.6 + 0.35) / 2.1)

    def test_ablation_sans_variante_par_defaut(self):
        table = ablation_table(results_frame().assign(variant='no_moving'))
        self.assertTrue(table['u_ratio'].isna().all())

    def test_badge_de_remplissage(self):
        self.assertIn('#28a745', utilization_badge(0.9))
        self.assertIn('#dc3545', utilization_badge(0.1))
        self.assertEqual(utilization_badge(None), 'N/A')


# =============================================================================
# TESTS DU SERVICE ET DE LA COMMANDE
# =============================================================================

class BenchmarkServiceTest(TestCase):
    """Exécution d'une suite sur un petit répertoire d'instances"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)
        (self.dir / 'sample.txt').write_text(BENCH_SAMPLE, encoding='utf-8')
        self.service = BenchmarkService()

    def tearDown(self):
        self.tmp.cleanup()

    def test_taches_par_variante(self):
        big = self.dir / 'big'
        big.mkdir()
        (big / 'one.txt').write_text(" 1\n 1 1\n 100 100 50\n 1\n 1 5 1 5 1 5 1 3\n", encoding='utf-8')
        tasks = self.service.build_tasks(get_suite('ablation'), big, seed=4)
        self.assertEqual([t.variant for t in tasks], list(VARIANTS))
        self.assertEqual({t.group for t in tasks}, {'all'})
        self.assertTrue(all(t.instance.algo.rng_seed == 4 for t in tasks))
        self.assertFalse(tasks[1].instance.algo.use_grid)

    def test_parametres_de_la_suite(self):
        tasks = self.service.build_tasks(get_suite('br'), self.dir, seed=0, overrides=FAST)
        instance = tasks[0].instance
        self.assertEqual(instance.packing.min_item_overlap, 1.0)
        self.assertEqual(instance.packing.max_padding_height, 0)
        self.assertEqual(instance.algo.ep_sort_order, ('x', 'y', 'z'))
        self.assertEqual(instance.algo.max_rgs_iters, 3)
        self.assertEqual([t.group for t in tasks], ['J=1', 'J=2'])

    def test_execution_enregistree(self):
        report = self.service.run('br', self.dir, seed=0, overrides=FAST)
        self.assertEqual(BenchmarkRun.objects.count(), 1)
        run = BenchmarkRun.objects.get()
        self.assertEqual(run, report.run)
        self.assertEqual(run.instance_count, 2)
        self.assertEqual(run.params['ep_sort_order'], ['x', 'y', 'z'])
        self.assertEqual(run.results.count(), 2)
        self.assertTrue(all(r.valid for r in BenchmarkResult.objects.all()))
        self.assertEqual(list(report.table['group']), ['J=1', 'J=2', 'total'])
        self.assertTrue(0 < run.mean_utilization <= 1)

    def test_repertoire_sans_instance(self):
        empty = self.dir / 'vide'
        empty.mkdir()
        with self.assertRaises(PackingException) as ctx:
            self.service.run('br', empty, persist=False)
        self.assertEqual(ctx.exception.error_code, 'MISSING_INSTANCES')

    def test_commande_bench(self):
        out_dir = self.dir / 'resultats'
        out = StringIO()
        call_command('bench', 'br', str(self.dir), '--param', 'min_rgs_iters=1', '--param', 'max_rgs_iters=3',
                     '--no-persist', '--out', str(out_dir), stdout=out)
        self.assertEqual(BenchmarkRun.objects.count(), 0)
        self.assertTrue((out_dir / 'table.csv').exists())
        self.assertEqual(len(pd.read_csv(out_dir / 'results.csv')), 2)
        self.assertIn('total', out.getvalue())
