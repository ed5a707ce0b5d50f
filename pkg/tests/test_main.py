"""Tests for the command line: output formats and exit codes."""

import json
import logging
import math

import pytest

import main as cli
from config import Config as C
from data_collector import DataCollector
from errors import FitError


@pytest.fixture(autouse=True)
def restore_logging(monkeypatch):
    root = logging.getLogger()
    level = root.level
    monkeypatch.setattr(DataCollector, 'path', DataCollector.path)
    monkeypatch.setattr(DataCollector, 'current_run_id', None)
    yield
    # drop the stderr handler installed by main
    for handler in root.handlers[:]:
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)
    root.setLevel(level)


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParams:

    def test_parse(self):
        assert cli.parse_params("a=2, b=0.5,alpha=1e-2") == {'a': 2.0, 'b': 0.5, 'alpha': 0.01}

    @pytest.mark.parametrize("text", ["a=2,b", "a=x"])
    def test_malformed(self, text):
        with pytest.raises(cli.UsageError):
            cli.parse_params(text)

    def test_build_distribution(self):
        d = cli.build_distribution('llu', 'a=2,b=0.5')
        assert (d.a, d.b) == (2.0, 0.5)

    @pytest.mark.parametrize("model, text", [('llw', 'a=1,b=1'), ('llu', 'a=1,b=1,c=2'),
                                             ('mow', 'alpha=1,beta=1,a=1')])
    def test_build_distribution_rejects(self, model, text):
        with pytest.raises(cli.UsageError):
            cli.build_distribution(model, text)


class TestPointCommands:

    def test_cdf(self, capsys):
        code, out, _ = _run(capsys, 'cdf', '--model', 'llu', '--params', 'a=1,b=0',
                            '--at', repr(math.exp(-1.0)))
        assert code == C.EXIT_OK
        assert float(out) == pytest.approx(2.0 / math.e, rel=1e-14)

    def test_hazard_json(self, capsys):
        code, out, _ = _run(capsys, 'hazard', '--model', 'llu', '--params', 'a=1,b=0',
                            '--at', repr(math.exp(-1.0)), '--json')
        record = json.loads(out)
        assert code == C.EXIT_OK
        assert record['hazard'] == pytest.approx(3.78442, abs=1e-5)
        assert record['at'] == math.exp(-1.0)

    def test_quantile_outside_unit_interval(self, capsys):
        code, _, err = _run(capsys, 'quantile', '--model', 'llu', '--params', 'a=1,b=0',
                            '--at', '1.5')
        assert code == C.EXIT_USAGE
        assert "error" in err

    def test_invalid_parameter_value(self, capsys):
        code, _, _ = _run(capsys, 'pdf', '--model', 'llu', '--params', 'a=-1,b=0', '--at', '0.5')
        assert code == C.EXIT_USAGE


class TestSample:

    def test_repeatable(self, capsys):
        argv = ('sample', '--model', 'llu', '--params', 'a=2,b=0.5', '-n', '5', '--seed', '3')
        _, first, _ = _run(capsys, *argv)
        _, second, _ = _run(capsys, *argv)
        values = [float(v) for v in first.split()]
        assert first == second
        assert len(values) == 5
        assert all(0.0 < v < 1.0 for v in values)

    def test_non_positive_size(self, capsys):
        code, _, _ = _run(capsys, 'sample', '--model', 'llu', '--params', 'a=2,b=0.5', '-n', '0')
        assert code == C.EXIT_USAGE


class TestAnalysis:

    def test_shape(self, capsys):
        code, out, _ = _run(capsys, 'shape', '--model', 'llu', '--params', 'a=2,b=0',
                            '--curve', 'density', '--json')
        points = [json.loads(line) for line in out.splitlines()]
        assert code == C.EXIT_OK
        assert len(points) == 1
        assert points[0]['kind'] == 'maximum'
        assert points[0]['x'] == pytest.approx(math.exp(-1.0), rel=1e-9)

    def test_moments(self, capsys):
        code, out, _ = _run(capsys, 'moments', '--model', 'llu', '--params', 'a=2,b=0.5', '--json')
        lines = [json.loads(line) for line in out.splitlines()]
        assert code == C.EXIT_OK
        assert [line['r'] for line in lines] == [1, 2, 3, 4]
        assert lines[0]['value'] == pytest.approx(4.0 * 2.5 / (2.0 * 9.0), abs=1e-3)

    def test_strict_moments_fail(self, capsys):
        code, _, err = _run(capsys, 'moments', '--model', 'llu', '--params', 'a=1,b=0', '--strict')
        assert code == C.EXIT_FIT
        assert "series" in err


class TestData:

    def test_summary(self, capsys):
        code, out, _ = _run(capsys, 'summary', '--data', 'bjerkedal', '--json')
        assert code == C.EXIT_OK
        assert json.loads(out)['Count'] == 72

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = _run(capsys, 'summary', '--data', str(tmp_path / "absent.txt"))
        assert code == C.EXIT_DATA
        assert "data error" in err

    def test_unit_interval_model_on_survival_times(self, capsys):
        code, _, _ = _run(capsys, 'fit', '--model', 'llu', '--data', 'bjerkedal')
        assert code == C.EXIT_DATA

    @pytest.mark.parametrize("argv", [('fit', '--model', 'weibull'),
                                      ('compare', '--models', 'weibull,mow')])
    def test_non_positive_observation(self, capsys, tmp_path, argv):
        path = tmp_path / "times.txt"
        path.write_text("12 0 30\n", encoding='utf-8')
        code, _, err = _run(capsys, *argv, '--data', str(path), '--starts', '2')
        assert code == C.EXIT_DATA
        assert "must be positive" in err


class TestFitCommands:

    def test_weibull_json_with_ledger(self, capsys, tmp_path):
        ledger = tmp_path / "fits.csv"
        code, out, _ = _run(capsys, 'fit', '--model', 'weibull', '--data', 'bjerkedal',
                            '--starts', '3', '--log', str(ledger), '--json')
        record = json.loads(out)
        assert code == C.EXIT_OK
        assert record['estimates']['alpha'] == pytest.approx(0.00142204, rel=2e-2)
        assert record['unbounded'] is False
        assert record['dataset'] == 'bjerkedal'
        assert len(ledger.read_text().splitlines()) == 2

    def test_compare_subset(self, capsys):
        code, out, _ = _run(capsys, 'compare', '--models', 'weibull,mow', '--data', 'bjerkedal',
                            '--starts', '2', '--json')
        models = [json.loads(line)['model'] for line in out.splitlines()]
        assert code == C.EXIT_OK
        assert sorted(models) == ['mow', 'weibull']

    def test_ledger_command(self, capsys, tmp_path):
        ledger = tmp_path / "fits.csv"
        _run(capsys, 'fit', '--model', 'weibull', '--data', 'bjerkedal', '--starts', '2',
             '--log', str(ledger))
        code, out, _ = _run(capsys, 'ledger', '--path', str(ledger), '--json')
        records = [json.loads(line) for line in out.splitlines()]
        assert code == C.EXIT_OK
        assert [r['model'] for r in records] == ['weibull']
        assert records[0]['Run_ID'] == "0001"
        code, out, _ = _run(capsys, 'ledger', '--path', str(ledger))
        assert code == C.EXIT_OK
        assert "weibull" in out

    def test_empty_ledger(self, capsys, tmp_path):
        code, out, _ = _run(capsys, 'ledger', '--path', str(tmp_path / "none.csv"))
        assert code == C.EXIT_OK
        assert out.strip() == "no fits recorded"

    def test_unknown_model(self, capsys):
        code, _, _ = _run(capsys, 'fit', '--model', 'gamma', '--data', 'bjerkedal')
        assert code == C.EXIT_USAGE

    def test_fit_failure(self, capsys, monkeypatch):
        def diverge(*args, **kwargs):
            raise FitError("All 2 starts diverged",
                           [{'start': 0, 'message': 'penalty', 'objective': 1e100},
                            {'start': 1, 'message': 'penalty', 'objective': 1e100}])

        monkeypatch.setattr(cli, 'maximize', diverge)
        code, _, err = _run(capsys, 'fit', '--model', 'weibull', '--data', 'bjerkedal')
        assert code == C.EXIT_FIT
        assert "start 1: penalty" in err


class TestUsage:

    @pytest.mark.parametrize("argv", [[], ['fit'], ['cdf', '--model', 'mow', '--params', 'a=1',
                                                    '--at', '1'], ['unknown']])
    def test_parser_errors_exit_with_usage_code(self, argv):
        with pytest.raises(SystemExit) as info:
            cli.main(argv)
        assert info.value.code == C.EXIT_USAGE
