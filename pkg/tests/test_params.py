import json
import re
import math

import pytest
from hypothesis import given

from conftest import admissible_params
from cosserat_soliton.errors import InadmissibleParams
from cosserat_soliton.params import FIXTURES, PARAM_KEYS, MaterialParams, fixture, load_params


def test_type_a_caption_values():
    p = fixture("type_a")
    caption = (0.7, 0.5, 0.5, 0.1, 0.1, 0.1, 0.3, 1.0, 0.5)
    assert p == MaterialParams.from_caption(*caption)


def test_type_d_differs_from_type_c_only_in_kappa1():
    c, d = fixture("type_c").to_dict(), fixture("type_d").to_dict()
    assert {k for k in c if c[k] != d[k]} == {"kappa1"}
    assert d["kappa1"] == 3.0


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_load_with_all_keys(name):
    assert set(fixture(name).to_dict()) == set(PARAM_KEYS)


@given(admissible_params())
def test_dict_round_trip(p):
    assert MaterialParams.from_dict(json.loads(json.dumps(p.to_dict()))) == p


def test_load_params_file(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(fixture("type_c").to_dict()))
    assert load_params(path) == fixture("type_c")


@pytest.mark.parametrize("change,needle", [
    ({"rho": -1.0}, "rho > 0"), ({"rho_rot": 0.0}, "rho_rot > 0"), ({"mu": 0.0}, "mu > 0"),
    ({"mu_c": -1e-3}, "mu_c >= 0"), ({"lambda": -1.0}, "lambda + 2 mu > 0"),
    ({"kappa1": -6.0, "kappa3": 0.5}, "kappa1 + 6 kappa3 > 0"),
    ({"chi1": math.inf}, "chi1 must be finite"), ({"mu": "big"}, "mu must be a number"),
    ({"mu": True}, "mu must be a number")])
def test_admissibility(change, needle):
    data = fixture("type_a").to_dict()
    data.update(change)
    with pytest.raises(InadmissibleParams, match=re.escape(needle)):
        MaterialParams.from_dict(data)


def test_missing_keys_named():
    data = fixture("type_a").to_dict()
    del data["lambda"], data["kappa2"]
    with pytest.raises(InadmissibleParams, match="kappa2, lambda"):
        MaterialParams.from_dict(data)


def test_with_accepts_external_lambda_name():
    assert fixture("type_a").with_(**{"lambda": 2.0}).lam == 2.0
