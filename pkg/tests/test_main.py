import json
import os

import pandas as pd
import pytest

from config import SWEEP_COLUMNS
from main import (
    EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_OK, build_parser, main, resolve_config,
)
from optimizer import alternating_optimize, complexity_estimate
from summary import print_solution

SMALL = ['--nt', '4', '--ne', '1', '--d', '20', '--quiet']


def read(path):
    with open(path, 'rb') as fh:
        return fh.read()


class TestSolve:
    def test_default_instance(self, capsys):
        assert main(['solve']) == EXIT_OK
        out = capsys.readouterr().out
        assert 'converged' in out
        assert 'Secrecy rate' in out
        assert 'Operation count (est.)' in out

    def test_reports_operation_count(self, capsys, default_instance):
        ch, an, params = default_instance
        sol = alternating_optimize(ch, params, an=an)
        print_solution(sol, params)
        out = capsys.readouterr().out
        if sol.feasible:
            expected = complexity_estimate(params.nt, params.d, sol.iterations)
            assert f"Operation count (est.):          {expected:.3e}" in out
        else:
            assert 'Operation count' not in out

    def test_infeasible_threshold(self):
        assert main(['solve', '--gamma-s-th-db', '80']) == EXIT_INFEASIBLE

    def test_too_many_eve_antennas(self, capsys):
        assert main(['solve', '--ne', '9']) == EXIT_CONFIG
        assert 'ne=9' in capsys.readouterr().err

    def test_channel_fixture_reproduces_solution(self, tmp_path):
        fixture = str(tmp_path / 'ch.json')
        first, second = str(tmp_path / 'a.json'), str(tmp_path / 'b.json')
        assert main(['solve', *SMALL, '--trial', '3', '--export-channel', fixture,
                     '--dump', first]) == EXIT_OK
        assert main(['solve', *SMALL, '--channel-file', fixture, '--dump', second]) == EXIT_OK
        with open(first, encoding='utf-8') as fa, open(second, encoding='utf-8') as fb:
            assert json.load(fa) == json.load(fb)

    def test_channel_fixture_shape_checked(self, tmp_path):
        fixture = str(tmp_path / 'ch.json')
        main(['solve', *SMALL, '--export-channel', fixture])
        assert main(['solve', '--channel-file', fixture]) == EXIT_CONFIG

    def test_validate_flag(self, capsys):
        assert main(['solve', '--d', '5000', '--validate']) == EXIT_OK
        assert 'ORACLE' in capsys.readouterr().out.upper()


class TestConfigResolution:
    def test_flag_beats_file(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'nt': 6, 'alpha': 0.5, 'schemes': 'proposed'}),
                        encoding='utf-8')
        args = build_parser().parse_args(['sweep', '--config', str(path), '--nt', '8'])
        cfg = resolve_config(args)
        assert (cfg.nt, cfg.alpha) == (8, 0.5)
        assert cfg.schemes == ['proposed']

    def test_unknown_file_key(self, tmp_path):
        path = tmp_path / 'run.json'
        path.write_text(json.dumps({'antennas': 6}), encoding='utf-8')
        assert main(['solve', '--config', str(path)]) == EXIT_CONFIG


class TestSweep:
    def test_threshold_sweep(self, tmp_path):
        out = str(tmp_path / 'sweep.csv')
        assert main(['sweep', '--values', '0:3:12', '--trials', '2', '--out', out,
                     '--quiet']) == EXIT_OK
        table = pd.read_csv(out)
        assert list(table.columns) == SWEEP_COLUMNS
        assert len(table) == 15
        with open(out, encoding='utf-8') as fh:
            assert fh.readline().strip() == ','.join(SWEEP_COLUMNS)
        with open(str(tmp_path / 'sweep.json'), encoding='utf-8') as fh:
            assert len(json.load(fh)['rows']) == 15

    def test_invalid_sweep_writes_nothing(self, tmp_path):
        out = str(tmp_path / 'bad.csv')
        code = main(['sweep', '--param', 'ne', '--values', '1,9', '--trials', '2',
                     '--out', out, '--quiet'])
        assert code == EXIT_CONFIG
        assert not os.path.exists(out)

    def test_unknown_scheme(self, tmp_path):
        code = main(['sweep', '--schemes', 'zf', '--values', '3', '--trials', '1',
                     '--out', str(tmp_path / 'x.csv'), '--quiet'])
        assert code == EXIT_CONFIG

    def test_identical_output_for_any_thread_count(self, tmp_path):
        paths = []
        for threads in ('1', '2'):
            out = str(tmp_path / f'sweep_{threads}.csv')
            assert main(['sweep', *SMALL, '--param', 'p_dbm', '--values', '40,48',
                         '--trials', '6', '--threads', threads, '--out', out]) == EXIT_OK
            paths.append(out)
        assert read(paths[0]) == read(paths[1])
        assert read(paths[0].replace('.csv', '.json')) == read(paths[1].replace('.csv', '.json'))


class TestStudies:
    def test_convergence_files(self, tmp_path):
        out = str(tmp_path / 'conv.csv')
        assert main(['convergence', *SMALL, '--trials', '4', '--tolerances', '1e-2,1e-8',
                     '--out', out]) == EXIT_OK
        assert list(pd.read_csv(out).columns) == ['iteration', 'mean_r_sec', 'runs']
        assert os.path.exists(str(tmp_path / 'conv_histogram.csv'))
        tolerances = pd.read_csv(str(tmp_path / 'conv_tolerances.csv'))
        assert list(tolerances['tolerance']) == pytest.approx([1e-2, 1e-8])

    def test_profiles_file(self, tmp_path):
        out = str(tmp_path / 'profiles.csv')
        assert main(['profiles', *SMALL, '--instances', '1', '--out', out]) == EXIT_OK
        table = pd.read_csv(out)
        assert set(table['curve']) <= {'phi', 'lambda'}

    def test_validate(self):
        assert main(['validate', '--d', '5000', '--instances', '1']) == EXIT_OK
