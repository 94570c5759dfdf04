import json

import numpy as np
import pytest

from helmfem.core.errors import ComputationError, ParameterError, StudyError
from helmfem.core.models import ProblemKind, ProblemSpec, StudyRecord
from helmfem.study.config import CONFIG_ENV_VAR, StudyConfig
from helmfem.study.diagnostics import quadrature_crime, refinement_study
from helmfem.study.records import read_records, write_records
from helmfem.study.runner import StudyRunner, h_law, run_single, run_study
from helmfem.utils.visualization import create_formatter

RECORDS = [
    StudyRecord(f=0.5, hmax=0.47, err=0.0123, nor=3.4, dofs=1234, wall_seconds=0.5),
    StudyRecord(f=1.0, hmax=0.2 / 3.0, err=1.0 / 3.0, nor=7.25, dofs=99999, wall_seconds=2.25),
]


class TestMeshLaw:
    def test_reference_value(self):
        assert h_law(2 * np.pi, 2, 16.0) == pytest.approx(2.0 * (2 * np.pi) ** -1.25)
        assert h_law(2 * np.pi, 2, 16.0) == pytest.approx(0.2007, abs=1e-4)

    @pytest.mark.parametrize("p", [1, 2, 3, 4])
    def test_identity(self, p):
        k = 3.7
        assert h_law(k, p, k ** (2 * p + 1)) == pytest.approx(1.0)

    def test_doubling(self):
        assert h_law(10.0, 2, 16.0) / h_law(5.0, 2, 16.0) == pytest.approx(2.0**-1.25)

    def test_invalid(self):
        with pytest.raises(ParameterError):
            h_law(0.0, 2, 16.0)

    def test_cap(self, penetrable):
        runner = StudyRunner(penetrable, p=3)
        assert runner.target_h(np.pi, 729.0) == 0.5


class TestRecords:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "study.txt"
        write_records(path, RECORDS)
        assert path.read_text().splitlines()[0] == "f hmax err nor dofs seconds"
        assert read_records(path) == RECORDS

    def test_minimal_columns(self, tmp_path):
        path = tmp_path / "four_columns.txt"
        path.write_text("f hmax err nor\n0.5 0.4 0.01 2.0\n")
        (record,) = read_records(path)
        assert record.relative == pytest.approx(0.005)
        assert record.dofs == 0

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("f err\n1 2\n")
        with pytest.raises(ParameterError):
            read_records(path)


class TestFormatters:
    def test_table(self):
        text = create_formatter("table").format_records(RECORDS)
        assert text.splitlines()[2].split()[1] == repr(0.2 / 3.0)

    def test_json(self):
        rows = json.loads(create_formatter("json").format_records(RECORDS))
        assert rows[0]["dofs"] == 1234
        assert rows[1]["relative"] == pytest.approx(RECORDS[1].relative)

    def test_summary_reports_rate(self):
        text = create_formatter("summary").format_records(RECORDS)
        assert "rate" in text.splitlines()[0]
        assert len(text.splitlines()) == 4

    def test_unknown(self):
        with pytest.raises(ValueError, match="Available formatters"):
            create_formatter("xml")


class TestConfig:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
        config = StudyConfig()
        assert config.mesh_constant(2) == 16.0
        assert config.mesh_constant(3) == 729.0
        assert config.mesh_constant(4) == 6.0**8
        assert config.frequencies == [0.5, 1.0, 2.0, 4.0, 8.0]
        assert config.mie_radius == 2.5

    def test_unknown_degree(self, monkeypatch):
        monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
        with pytest.raises(ParameterError, match="Configured degrees"):
            StudyConfig().mesh_constant(1)

    def test_environment_file_replaces_defaults(self, tmp_path, monkeypatch):
        path = tmp_path / "study.json"
        path.write_text(json.dumps({"mesh_law": {"1": {"C": 2.0}}, "frequencies": [3.0]}))
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        config = StudyConfig()
        assert config.mesh_constant(1) == 2.0
        assert config.frequencies == [3.0]
        with pytest.raises(ParameterError):
            config.mesh_constant(2)

    def test_template(self, tmp_path):
        path = tmp_path / "nested" / "template.json"
        StudyConfig.create_config_template(str(path))
        assert StudyConfig(str(path)).mesh_constant(3) == 729.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParameterError):
            StudyConfig(str(tmp_path / "absent.json"))


class TestRunSingle:
    def test_soundsoft_error_range(self):
        spec = ProblemSpec.from_frequency(ProblemKind.SOUND_SOFT, 0.5)
        report, record = run_single(spec, 2, 2, h_law(spec.wavenumber, 2, 16.0))
        assert 0.0 < report.relative < 0.5
        assert record.f == pytest.approx(0.5)
        assert record.dofs > 0
        assert record.relative == pytest.approx(report.relative)

    def test_deterministic(self, soundsoft):
        _, first = run_single(soundsoft, 2, 1, 0.5)
        _, second = run_single(soundsoft, 2, 1, 0.5)
        assert first.same_result(second)

    def test_penetrable_error_region_includes_inner(self, penetrable):
        report, _ = run_single(penetrable, 2, 2, 0.5)
        assert report.element_count > 0
        assert report.inner_element_count > 0
        assert 0.0 < report.relative < 0.5


class TestRunStudy:
    async def test_records_in_input_order(self, tmp_path, penetrable):
        out = tmp_path / "sweep.txt"
        runner = StudyRunner(penetrable, p=2, q=2)
        records = await runner.run_study(16.0, [0.5, 1.0], out=out, max_workers=2)
        assert [r.f for r in records] == [0.5, 1.0]
        assert records[1].hmax < records[0].hmax
        assert [r.same_result(s) for r, s in zip(read_records(out), records)] == [True, True]

    async def test_module_wrapper(self, soundsoft):
        records = await run_study(soundsoft, 1, 1, 4.0, [0.25])
        assert len(records) == 1

    @pytest.mark.parametrize("f_list", [[], [1.0, 0.5], [0.0, 1.0]])
    async def test_invalid_frequencies(self, penetrable, f_list):
        with pytest.raises(ParameterError):
            await StudyRunner(penetrable, p=2).run_study(16.0, f_list)

    async def test_failure_reports_frequency(self, penetrable, monkeypatch):
        runner = StudyRunner(penetrable, p=2)

        def broken(spec, h_target, mesh=None, dump_matrix=None):
            raise ComputationError("singular", mode=3)

        monkeypatch.setattr(runner, "run_single", broken)
        with pytest.raises(StudyError) as info:
            await runner.run_study(16.0, [0.5])
        assert info.value.frequency == 0.5
        assert isinstance(info.value.cause, ComputationError)


@pytest.mark.parametrize("study", [refinement_study, quadrature_crime])
def test_diagnostics_need_three_meshes(penetrable, study):
    with pytest.raises(ParameterError, match="at least 3"):
        study(penetrable, 2, 2, [0.5, 0.25])
