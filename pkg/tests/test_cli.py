"""
Tests for the chemofront command line.
"""
import json

import pytest

from chemofront import __version__
from chemofront.cli import build_parser, main


@pytest.fixture
def ordering_file(tmp_path):
    path = tmp_path / 'ordering.json'
    path.write_text(json.dumps({
        'scenario': 'ordering',
        'grid': {'n_cells': 100},
        'controls': {'t_end': 0.02},
    }))
    return path


class TestParser:
    """Test argument parsing."""

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_version(self, capsys):
        with pytest.raises(SystemExit):
            build_parser().parse_args(['--version'])
        assert __version__ in capsys.readouterr().out

    def test_sweep_params_accumulate(self):
        args = build_parser().parse_args(
            ['sweep', 'cfg.json', '--param', 'model.chi=1,2', '--param', 'bump.mu=1'])
        assert args.param == ['model.chi=1,2', 'bump.mu=1']

    def test_validate_pme_has_no_scenario_flag(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(['validate-pme', 'cfg.json', '--scenario', 'decay'])

    def test_verbosity(self):
        args = build_parser().parse_args(['simulate', 'cfg.json', '-vv'])
        assert args.verbose == 2


class TestMain:
    """Test end-to-end commands."""

    def test_simulate(self, ordering_file, tmp_path):
        out = tmp_path / 'run'
        assert main(['simulate', str(ordering_file), '--out', str(out)]) == 0
        assert (out / 'trace.csv').exists()

    def test_cells_override(self, ordering_file, tmp_path):
        out = tmp_path / 'run'
        main(['simulate', str(ordering_file), '--out', str(out), '--cells', '64'])
        report = json.loads((out / 'report.json').read_text())
        assert report['config']['grid']['n_cells'] == 64

    def test_sweep(self, ordering_file, tmp_path):
        out = tmp_path / 'grid'
        code = main(['sweep', str(ordering_file), '--out', str(out), '--threads', '1',
                     '--param', 'model.chi=0.5,1.0'])
        assert code == 0
        assert (out / 'summary.csv').exists()
        assert (out / 'point_001' / 'report.json').exists()

    def test_certify(self, tmp_path):
        path = tmp_path / 'cfg.json'
        path.write_text('{}')
        out = tmp_path / 'cert'
        code = main(['certify', str(path), '--scenario', 'shrinking', '--out', str(out)])
        assert code in (0, 1)
        report = json.loads((out / 'report.json').read_text())
        assert 'C2' in report['results']

    def test_certify_without_certificate(self, tmp_path):
        path = tmp_path / 'cfg.json'
        path.write_text('{}')
        assert main(['certify', str(path), '--scenario', 'pme-validate',
                     '--out', str(tmp_path / 'cert')]) == 2

    def test_missing_config(self, tmp_path, capsys):
        assert main(['simulate', str(tmp_path / 'absent.json')]) == 2
        assert 'config error' in capsys.readouterr().err

    def test_invalid_config(self, tmp_path, capsys):
        path = tmp_path / 'cfg.json'
        path.write_text(json.dumps({'scenario': 'ordering', 'grid': {'n_cells': 2}}))
        assert main(['simulate', str(path)]) == 2
        assert 'grid.n_cells' in capsys.readouterr().err
