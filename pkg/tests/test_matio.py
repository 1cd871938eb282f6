import numpy as np
import pytest

from obpursuit.errors import ConfigError
from obpursuit.matio import load_matrix, load_vector, save_matrix, save_vector


def test_complex_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    a = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    path = tmp_path / "m.csv"
    save_matrix(path, a)
    b, field = load_matrix(path)
    assert field == "complex"
    assert np.array_equal(a, b)


def test_real_roundtrip_and_field_tag(tmp_path):
    a = np.array([[1.5, -2.25], [0.0, 1e-17]])
    path = tmp_path / "r.csv"
    save_matrix(path, a)
    b, field = load_matrix(path)
    assert field == "real"
    assert np.array_equal(b, a.astype(np.complex128))
    header = path.read_text().splitlines()[0]
    assert header == "2,2,real"


def test_column_major_layout(tmp_path):
    a = np.array([[1.0, 3.0], [2.0, 4.0]])
    path = tmp_path / "c.csv"
    save_matrix(path, a)
    lines = path.read_text().splitlines()
    assert lines[1] == "1.0,2.0"   # first column
    assert lines[2] == "3.0,4.0"   # second column


def test_negative_imaginary_format(tmp_path):
    a = np.array([[1.0 - 2.0j]])
    path = tmp_path / "n.csv"
    save_matrix(path, a)
    assert path.read_text().splitlines()[1] == "1.0-2.0i"


def test_vector_roundtrip(tmp_path):
    v = np.array([1.0, -2.0, 3.5])
    path = tmp_path / "v.csv"
    save_vector(path, v)
    assert np.array_equal(load_vector(path), v.astype(np.complex128))


@pytest.mark.parametrize("content", [
    "2,2\n1,2\n3,4\n",                 # missing field
    "2,x,real\n1,2\n3,4\n",            # non-integer
    "2,2,strange\n1,2\n3,4\n",         # bad field tag
    "2,2,real\n1.0,2.0\n",             # truncated
    "2,2,real\n1.0\n2.0,3.0\n",        # short column
])
def test_malformed_files_raise(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_matrix(path)
