import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from macsf.config import RunConfig, load_support_csv, parse_config, serialize_config
from macsf.contorsion import COMPONENT_KEYS, projective, semi_symmetric
from macsf.curve import ellipse_support, grid_angles
from macsf.errors import ParseError, ValidationError


def test_minimal_defaults():
    cfg = parse_config("initial = circle\n")
    assert cfg.grid_size == 256 and cfg.cfl == 0.2 and cfg.rho0 == 1.0
    assert cfg.tensor().components == (0.0,) * 8
    assert cfg.initial_support().n == 256


def test_comments_blank_lines_and_quotes():
    cfg = parse_config("# scenario\n\ninitial = 'ellipse'  # shape\na = 1\nb = 0.8\nN = 64\n")
    assert cfg.initial == "ellipse" and cfg.n == 64
    assert np.allclose(cfg.initial_support().values, ellipse_support(1.0, 0.8, 64).values)


def test_explicit_components():
    cfg = parse_config("initial = circle\nT211 = -0.15\nT122 = 0.5\n")
    m = cfg.tensor().as_mapping()
    assert m["T211"] == -0.15 and m["T122"] == 0.5


def test_projective_connection():
    cfg = parse_config("initial = circle\nconnection = projective\nU = [1, 2]\n")
    assert cfg.tensor() == projective((1.0, 2.0))


def test_semi_symmetric_connection():
    cfg = parse_config("initial = circle\nconnection = semi_symmetric\nU = [0.5, -1]\n")
    assert cfg.tensor() == semi_symmetric((0.5, -1.0))


def test_flow_config_overrides():
    cfg = parse_config("initial = circle\ncfl = 0.3\nrecord_every = 7\n")
    fc = cfg.flow_config(t_max=1.0)
    assert fc.cfl == 0.3 and fc.record_every == 7 and fc.t_max == 1.0


@pytest.mark.parametrize("text,line", [
    ("initial = circle\nfoo = 1\n", 2),
    ("initial = circle\ncfl = 0.1\ncfl = 0.2\n", 3),
    ("initial circle\n", 1),
    ("initial = circle\n\ncfl = fast\n", 3),
    ("initial = circle\ncfl =\n", 2),
    ("initial = circle\nconnection = projective\nU = 1, 2\n", 3),
    (" = 3\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_config(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@pytest.mark.parametrize("text,field", [
    ("initial = circle\nN = 15\n", "N"),
    ("initial = circle\nN = 8\n", "N"),
    ("initial = circle\nN = 64.5\n", "N"),
    ("N = 64\n", "initial"),
    ("initial = square\n", "initial"),
    ("initial = circle\ncfl = -1\n", "cfl"),
    ("initial = circle\nt_max = inf\n", "t_max"),
    ("initial = circle\nrecord_every = 0\n", "record_every"),
    ("initial = ellipse\na = 1\n", "b"),
    ("initial = ellipse\na = 1\nb = 0\n", "b"),
    ("initial = circle\na = 1\n", "a"),
    ("initial = csv\n", "csv_path"),
    ("initial = circle\nconnection = weird\n", "connection"),
    ("initial = circle\nconnection = projective\n", "U"),
    ("initial = circle\nconnection = projective\nU = [1, 2, 3]\n", "U"),
    ("initial = circle\nconnection = projective\nU = [1, 2]\nT111 = 1\n", "T111"),
    ("initial = circle\nU = [1, 2]\n", "U"),
    ("initial = circle\nT111 = nan\n", "T111"),
    ("initial = circle\nnormalized_mode = sideways\n", "normalized_mode"),
])
def test_validation_errors_name_field(text, field):
    with pytest.raises(ValidationError) as info:
        parse_config(text)
    assert info.value.field == field


def _write_csv(path, values, header=True):
    th = grid_angles(values.size)
    lines = ["theta,S"] if header else []
    lines += [f"{float(t)!r},{float(v)!r}" for t, v in zip(th, values)]
    path.write_text("\n".join(lines) + "\n")


def test_csv_initial(tmp_path):
    S = ellipse_support(1.0, 0.6, 64)
    _write_csv(tmp_path / "s.csv", S.values)
    cfg = parse_config("initial = csv\ncsv_path = s.csv\n")
    assert np.array_equal(cfg.initial_support(str(tmp_path)).values, S.values)
    _write_csv(tmp_path / "bare.csv", S.values, header=False)
    assert np.array_equal(load_support_csv(tmp_path / "bare.csv").values, S.values)


def test_csv_errors(tmp_path):
    with pytest.raises(ValidationError):
        load_support_csv(tmp_path / "missing.csv")
    _write_csv(tmp_path / "short.csv", np.ones(10))
    with pytest.raises(ValidationError):
        load_support_csv(tmp_path / "short.csv")
    (tmp_path / "bad.csv").write_text("S\n" + "x\n" * 16)
    with pytest.raises(ValidationError):
        load_support_csv(tmp_path / "bad.csv")
    S = ellipse_support(1.0, 0.6, 64)
    _write_csv(tmp_path / "s.csv", S.values)
    cfg = parse_config("initial = csv\ncsv_path = s.csv\nN = 32\n")
    with pytest.raises(ValidationError):
        cfg.initial_support(str(tmp_path))


pos = st.floats(1e-3, 1e3, allow_nan=False, allow_infinity=False)
comp = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@st.composite
def configs(draw):
    initial = draw(st.sampled_from(["circle", "ellipse", "csv"]))
    connection = draw(st.sampled_from(["explicit", "projective", "semi_symmetric"]))
    kw = dict(
        initial=initial,
        n=draw(st.none() | st.integers(8, 512).map(lambda k: 2 * k)),
        cfl=draw(st.floats(1e-3, 0.5)),
        t_max=draw(pos),
        area_stop=draw(st.none() | pos),
        k_cap=draw(pos),
        record_every=draw(st.integers(1, 10**6)),
        connection=connection,
        normalized_mode=draw(st.sampled_from(["posthoc", "direct"])),
        tau_max=draw(pos),
    )
    if initial == "circle":
        kw["rho0"] = draw(pos)
    elif initial == "ellipse":
        kw["a"], kw["b"] = draw(pos), draw(pos)
    else:
        kw["csv_path"] = draw(st.from_regex(r"[a-z0-9_/]{1,12}\.csv", fullmatch=True))
    if connection == "explicit":
        kw["components"] = tuple(draw(st.tuples(*[comp] * 8)))
    else:
        kw["U"] = (draw(comp), draw(comp))
    return RunConfig(**kw)


@settings(max_examples=300, deadline=None)
@given(configs())
def test_serialize_round_trip(cfg):
    assert parse_config(serialize_config(cfg)) == cfg


def test_component_keys_in_serialized_text():
    text = serialize_config(parse_config("initial = circle\nT221 = 2\n"))
    assert all(f"{k} = " in text for k in COMPONENT_KEYS)
