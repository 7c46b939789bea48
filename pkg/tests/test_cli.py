import asyncio
import io
import json
from pathlib import Path

import pytest

from app import CremonaLabApp, build_parser
from config import Config, LabConfig, LoggingConfig
from cremona.errors import UsageError

DATA_FILE = str(Path(__file__).resolve().parent.parent / "data" / "witness_maps.txt")


@pytest.fixture
def config():
    return Config(lab=LabConfig(workers=2, corpus_word_length=6, rho_word_length=4, newton_level=2))


def run_cli(config, *argv):
    stdout = io.StringIO()
    app = CremonaLabApp(config, stdout=stdout)
    code = asyncio.run(app.run(list(argv)))
    return code, json.loads(stdout.getvalue()), stdout.getvalue()


class TestParser:
    def test_usage_error_does_not_exit(self):
        with pytest.raises(UsageError):
            build_parser().parse_args(["no-such-command"])

    def test_repeatable_maps(self):
        args = build_parser().parse_args(["compose", "maps.txt", "-m", "g", "-m", "f"])
        assert args.map == ["g", "f"]


class TestExitCodes:
    def test_rho(self, config):
        code, report, _ = run_cli(config, "rho", DATA_FILE, "-m", "a1")
        assert code == 0
        assert report["status"] == "ok"
        assert report["command"] == {"name": "rho", "args": {"file": DATA_FILE, "map": ["a1"]}}
        assert report["result"]["matrix"] == [
            ["1", "0", "1", "0"], ["0", "1", "-1", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]]
        assert report["result"]["det"] == "1"
        assert report["result"]["sl_prime"] is True

    def test_rho_with_inverse(self, config):
        code, report, _ = run_cli(config, "rho", DATA_FILE, "-m", "a2", "--inverse", "a2_inv")
        assert code == 0
        assert report["result"]["inverse_matrix"][0] == ["1", "1", "0", "0"]

    def test_wrong_inverse(self, config):
        code, report, _ = run_cli(config, "rho", DATA_FILE, "-m", "a1", "--inverse", "a2")
        assert code == 3
        assert report["status"] == "verification_failure"
        assert report["result"]["type"] == "VerificationError"

    def test_not_in_g_form(self, config):
        code, report, _ = run_cli(config, "rho", DATA_FILE, "-m", "involution")
        assert code == 2
        assert report["status"] == "precondition_violation"
        assert report["result"]["type"] == "NotInGFormError"

    @pytest.mark.parametrize("argv", [
        ["unknown"],
        ["rho"],
        ["rho", DATA_FILE, "-m", "nosuch"],
        ["rho", DATA_FILE],
        ["parse"],
        ["diag-classify"],
        ["diag-classify", "--lambdas", "2,x"],
        ["compose", DATA_FILE, "-m", "a1"],
        ["corpus", "--workers", "-1"],
        ["freegroup", "--workers", "0"],
        ["contracts", DATA_FILE, "-m", "lambda", "--hyperplane", "3", "--attempts", "0"],
    ])
    def test_usage_errors(self, config, argv):
        code, report, _ = run_cli(config, *argv)
        assert code == 1
        assert report["status"] == "usage_error"

    def test_parse_error_position(self, config):
        code, report, _ = run_cli(config, "volume", "--points", "0,0; 1")
        assert code == 1
        assert report["result"]["type"] == "ParseError"
        assert "line" in report["result"] and "column" in report["result"]

    def test_bad_polynomial(self, config):
        code, report, _ = run_cli(config, "parse", "--poly", "X0 +* X1", "-n", "1")
        assert code == 1
        assert report["result"]["column"] == "5"

    def test_hypothesis_violation(self, config):
        code, report, _ = run_cli(config, "predict-leading", DATA_FILE, "-m", "a1", "--poly", "X2 + X3")
        assert code == 2
        assert report["result"]["type"] == "HypothesisViolationError"

    def test_zero_scalar(self, config):
        code, _, _ = run_cli(config, "diag-classify", "--lambdas", "2,0,1,1")
        assert code == 2


class TestCommands:
    def test_parse_file(self, config):
        code, report, _ = run_cli(config, "parse", DATA_FILE)
        assert code == 0
        maps = report["result"]["maps"]
        assert maps["a1"]["g_form"] is True
        assert maps["involution"]["g_form"] is False
        assert maps["lambda"]["degree"] == "2"
        assert report["result"]["affine"]["psi"] == ["X1", "X2", "X1^2 + X3"]

    def test_parse_polynomial(self, config):
        code, report, _ = run_cli(config, "parse", "--poly", "X1*X0 + 1/2*X1^2", "-n", "1")
        assert code == 0
        assert report["result"]["polynomial"] == "X0*X1 + 1/2*X1^2"

    def test_compose_to_identity(self, config):
        code, report, _ = run_cli(config, "compose", DATA_FILE, "-m", "lambda", "-m", "lambda_inv", "--normalize")
        assert code == 0
        assert report["result"]["identity"] is True

    def test_predict_leading(self, config):
        code, report, _ = run_cli(config, "predict-leading", DATA_FILE, "-m", "a1", "--poly", "X0*X1")
        assert code == 0
        assert report["result"]["predicted"] == {"d": "1", "I": ["1", "2", "0", "0"]}
        assert report["result"]["predicted"] == report["result"]["actual"]

    def test_newton_of_shear(self, config):
        code, report, _ = run_cli(config, "newton", DATA_FILE, "-m", "lambda")
        assert code == 0
        result = report["result"]
        assert len(result["levels"]) == 2
        assert result["stable"] is True
        assert result["standard_simplex"] is True
        assert result["volume"] == "1"

    def test_newton_polynomial(self, config):
        code, report, _ = run_cli(config, "newton", "--poly", "X0^2 + X1^2 + X2^2", "-n", "2")
        assert code == 0
        assert report["result"]["volume"] == "4"

    def test_volume(self, config):
        code, report, _ = run_cli(config, "volume", "--points", "0,0; 2,0; 0,2")
        assert code == 0
        assert report["result"]["volume"] == "4"

    def test_contracts(self, config):
        code, report, _ = run_cli(config, "contracts", DATA_FILE, "-m", "a2_conj_lambda", "--hyperplane", "3")
        assert code == 0
        assert report["result"]["point"] == ["0", "0", "0", "0", "1"]
        code, report, _ = run_cli(config, "contracts", DATA_FILE, "-m", "lambda", "--hyperplane", "3")
        assert report["result"]["point"] is None
        assert report["result"]["contracts"] is False

    def test_restrict(self, config):
        code, report, _ = run_cli(config, "restrict", DATA_FILE, "-m", "a2_conj_lambda", "--hyperplane", "3")
        assert code == 0
        assert report["result"]["nonzero_indices"] == ["4"]

    def test_jacobian(self, config):
        code, report, _ = run_cli(config, "jacobian", DATA_FILE, "-m", "psi", "--inverse", "psi_inv")
        assert code == 0
        assert report["result"]["jacobian"] == "1"
        code, _, _ = run_cli(config, "jacobian", DATA_FILE, "-m", "psi", "--inverse", "psi_tame")
        assert code == 3

    def test_freegroup(self, config):
        code, report, _ = run_cli(config, "freegroup", "--len", "6")
        assert code == 0
        assert report["result"]["distinct"] is True
        assert report["result"]["words_checked"] == "1457"

    def test_freegroup_rho(self, config):
        code, report, _ = run_cli(config, "freegroup", "--gens", "rho", "--len", "4")
        assert code == 0
        assert report["result"]["max_length"] == "4"

    def test_conjugate(self, config):
        code, report, _ = run_cli(config, "conjugate", DATA_FILE, "-m", "a2", "--word", "Ab")
        assert code == 0
        assert report["result"]["rho"] == report["result"]["predicted_rho"]
        code, report, _ = run_cli(config, "conjugate", DATA_FILE, "-m", "involution", "--word", "A")
        assert code == 0
        assert "rho" not in report["result"]

    def test_diag_classify(self, config):
        code, report, _ = run_cli(config, "diag-classify", "--lambdas", "2,3,5,7", "--len", "3")
        assert code == 0
        assert report["result"]["status"] == "moved"
        assert report["result"]["witness"] == "A"
        code, report, _ = run_cli(config, "diag-classify", "--symbolic", "all_equal", "-n", "4")
        assert report["result"]["status"] == "fixed_up_to_L"
        assert report["result"]["unconditional"] is True

    def test_corpus_entries(self, config):
        code, report, _ = run_cli(config, "corpus", "--entry", "pingpong", "--entry", "sl2_projection")
        assert code == 0
        assert report["result"]["total"] == "2"
        assert report["result"]["completed"] == "2"
        assert report["result"]["failed"] == []
        assert list(report["result"]["entries"]) == ["pingpong", "sl2_projection"]

    def test_unknown_corpus_entry(self, config):
        code, _, _ = run_cli(config, "corpus", "--entry", "nosuch")
        assert code == 1

    def test_corpus_history(self, tmp_path):
        config = Config(lab=LabConfig(workers=2, corpus_word_length=6, rho_word_length=4),
                        logging=LoggingConfig(analytics_dir=str(tmp_path)))
        code, _, _ = run_cli(config, "corpus", "--entry", "pingpong")
        assert code == 0
        code, report, _ = run_cli(config, "analytics", "--days", "1")
        assert code == 0
        assert report["command"]["args"] == {"days": "1"}
        assert report["result"]["total_runs"] == "1"
        assert report["result"]["failures"] == {}
        assert list(report["result"]["mean_seconds"]) == ["pingpong"]
        code, report, _ = run_cli(config, "analytics", "--keep-days", "30")
        assert code == 0
        assert report["result"]["total_runs"] == "1"

    def test_analytics_needs_directory(self, config):
        code, report, _ = run_cli(config, "analytics")
        assert code == 1
        assert report["result"]["type"] == "UsageError"


class TestDeterminism:
    def test_repeated_runs(self, config):
        argv = ["conjugate", DATA_FILE, "-m", "lambda", "--word", "AB"]
        assert run_cli(config, *argv)[2] == run_cli(config, *argv)[2]

    def test_workers_do_not_change_report(self, config):
        _, _, one = run_cli(config, "freegroup", "--len", "5", "--workers", "1")
        _, _, four = run_cli(config, "freegroup", "--len", "5", "--workers", "4")
        assert one == four

    def test_digest_tracks_file_content(self, config, tmp_path):
        path = tmp_path / "maps.txt"
        path.write_text("n = 1\nmap f = [X0 : X1]\n")
        first = run_cli(config, "gform", str(path), "-m", "f")[1]["inputs_digest"]
        path.write_text("n = 1\nmap f = [X0 : 2*X1]\n")
        second = run_cli(config, "gform", str(path), "-m", "f")[1]["inputs_digest"]
        assert first != second

    def test_compact_report(self):
        config = Config(lab=LabConfig(report_indent=0))
        _, _, text = run_cli(config, "volume", "--points", "0,0; 1,0; 0,1")
        assert text.count("\n") == 1
