import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from fuzzdyn import CIRCLE, UNIT_INTERVAL, characteristic, compactum, fuzzy_witness, tent
from fuzzdyn.io import (
    FormatError,
    certificate_to_json,
    dump_fuzzy,
    fuzzy_from_json,
    fuzzy_to_json,
    load_fuzzy,
    map_from_json,
    map_to_json,
)
from fuzzdyn.generate import random_finite_space, random_fuzzy

from strategies import fuzzy_sets, spaces


@given(spaces.flatmap(fuzzy_sets))
def test_fuzzy_json_round_trip(u):
    assert fuzzy_from_json(json.loads(json.dumps(fuzzy_to_json(u)))) == u


def test_finite_space_round_trip():
    rng = random.Random(4)
    for _ in range(20):
        s = random_finite_space(rng, rng.randint(1, 5))
        u = random_fuzzy(rng, s)
        assert fuzzy_from_json(fuzzy_to_json(u)) == u


def test_file_round_trip(tmp_path):
    u = random_fuzzy(random.Random(1), CIRCLE)
    path = tmp_path / "u.json"
    text = dump_fuzzy(u, path)
    assert load_fuzzy(path) == u
    assert json.loads(text)["levels"][-1] == "1"


@pytest.mark.parametrize(
    "obj, fragment",
    [
        ({"space": "interval", "levels": ["1"]}, "needs"),
        ({"space": "plane", "levels": ["1"], "cuts": [["0"]]}, "unknown space"),
        ({"space": "interval", "levels": [0.5, "1"], "cuts": [["0"], ["0"]]}, "p/q"),
        ({"space": "interval", "levels": ["1/2"], "cuts": [["0"]]}, "end at"),
        ({"space": "interval", "levels": ["1"], "cuts": "0"}, "list"),
        ({"space": {"finite": 2, "dist": [["0", "1"]]}, "levels": ["1"], "cuts": [[0]]}, "dist"),
        ({"space": {"finite": 1, "dist": [["0"]]}, "levels": ["1"], "cuts": [["0"]]}, "integers"),
    ],
)
def test_format_errors(obj, fragment):
    with pytest.raises(FormatError, match=fragment):
        fuzzy_from_json(obj)


def test_invalid_fuzzy_set_is_rejected():
    with pytest.raises(ValueError, match="not decreasing"):
        fuzzy_from_json({"space": "interval", "levels": ["1/2", "1"], "cuts": [["0"], ["1"]]})


def test_bad_json_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(FormatError):
        load_fuzzy(p)


@pytest.mark.parametrize("desc", ["tent", "doubling", "rotation:1/3", {"kind": "rotation", "theta": "2/5"}])
def test_map_descriptors_round_trip(desc):
    f = map_from_json(desc)
    g = map_from_json(map_to_json(f))
    for x in (F(0), F(1, 3), F(3, 4)):
        assert f(x) == g(x)


def test_map_descriptor_errors():
    with pytest.raises(FormatError):
        map_from_json("spiral")
    with pytest.raises(FormatError):
        map_from_json({"kind": "rotation"})
    with pytest.raises(FormatError):
        map_from_json({"kind": "identity"})
    assert map_from_json({"kind": "identity"}, UNIT_INTERVAL)(F(1, 5)) == F(1, 5)


def test_certificate_json_is_exact():
    u = characteristic(compactum(UNIT_INTERVAL, [F(1, 2)]))
    v = characteristic(compactum(UNIT_INTERVAL, [F(1, 4)]))
    cert = fuzzy_witness(tent(), u, v, F(1, 8))
    obj = certificate_to_json(cert)
    assert obj["n"] == cert.n and obj["eps"] == "1/8"
    assert fuzzy_from_json(obj["w"]) == cert.w
    assert F(obj["d_source"]) == cert.d_source
    assert len(obj["per_level_log"]) == len(cert.per_level_log)
