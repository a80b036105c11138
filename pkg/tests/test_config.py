import copy
import json

import pytest

from gcmlab._errors import ValidationError
from gcmlab.config import ConfigDocument, bundled_config_path, load_config, validate_document


@pytest.fixture
def doc():
    return json.loads(bundled_config_path("thm3i").read_text())


def test_bundled_config_loads(doc):
    cfg = load_config(bundled_config_path("thm3i"))
    assert cfg.experiment.scenario == "isoreg"
    assert cfg.seed == doc["seed"]
    assert cfg.experiment.seed == doc["seed"]


def test_examples_path_falls_back_to_bundled():
    assert load_config("examples/thm3i.cfg").experiment.n_grid == (400, 1600, 6400)


def test_round_trip(doc):
    cfg = ConfigDocument.from_dict(doc)
    again = ConfigDocument.from_dict(cfg.to_dict())
    assert again.experiment.digest() == cfg.experiment.digest()


@pytest.mark.parametrize(
    "mutate, path",
    [
        (lambda d: d["experiment"].update(foo=1), "/experiment"),
        (lambda d: d.update(version=2), "/version"),
        (lambda d: d["experiment"].update(R=10), "/experiment/R"),
        (lambda d: d["experiment"]["dependence"].update(kind="garch"), "/experiment/dependence/kind"),
        (lambda d: d.pop("seed"), "/"),
    ],
)
def test_schema_errors_carry_pointer(doc, mutate, path):
    bad = copy.deepcopy(doc)
    mutate(bad)
    with pytest.raises(ValidationError) as exc:
        validate_document(bad)
    assert exc.value.path == path


def test_hypothesis_error_is_anchored_under_experiment(doc):
    doc["experiment"]["truth"]["coefficients"] = [0.5]
    with pytest.raises(ValidationError) as exc:
        ConfigDocument.from_dict(doc)
    assert exc.value.path == "/experiment/truth"
    assert exc.value.hypothesis == "m'(t0) > 0"
    assert str(exc.value).count("hypothesis violated") == 1


def test_invalid_json(tmp_path):
    p = tmp_path / "x.cfg"
    p.write_text("{not json")
    with pytest.raises(ValidationError, match="invalid JSON"):
        load_config(p)
