import pytest

from hillocr import cli, neuralnet
from hillocr.hill import HillKey, save_key
from hillocr.neuralnet import save_model
from hillocr.raster import read_image


@pytest.fixture
def key_file(tmp_path, demo_key):
    path = tmp_path / "key.txt"
    save_key(demo_key, path)
    return str(path)


@pytest.fixture
def model_file(tmp_path, trained_net):
    path = tmp_path / "model.txt"
    save_model(trained_net, path)
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_keygen_and_inspect(tmp_path, capsys):
    path = str(tmp_path / "k3.txt")
    code, out, _ = run(["keygen", "--n", "3", "--seed", "7", "--out", path], capsys)
    assert code == 0 and "3x3" in out
    code, out, _ = run(["inspect-key", "--key", path], capsys)
    assert code == 0
    assert out.startswith("n: 3\n")
    assert len(out.split("inverse:\n")[1].splitlines()) == 3


def test_encrypt_decrypt(key_file, capsys):
    assert run(["encrypt", "--key", key_file, "--text", "HELP ME"], capsys)[:2] == (0, "RORVWO\n")
    assert run(["decrypt", "--key", key_file, "--text", "RORVWO"], capsys)[:2] == (0, "HELPME\n")


def test_decrypt_odd_length_is_data_error(key_file, capsys):
    code, _, err = run(["decrypt", "--key", key_file, "--text", "ROR"], capsys)
    assert code == 3 and err.startswith("error:")


def test_singular_key_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("2 26\n2 4\n1 3\n")
    code, _, err = run(["encrypt", "--key", str(path), "--text", "HI"], capsys)
    assert code == 4
    assert "not invertible" in err


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, _ = run(["inspect-key", "--key", str(tmp_path / "nope")], capsys)
    assert code == 3


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        cli.main(["encrypt", "--text", "HI"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_render(tmp_path, capsys):
    out_path = tmp_path / "r.pgm"
    code, out, _ = run(["render", "--text", "ABC", "--out", str(out_path), "--scale", "5"], capsys)
    assert code == 0
    img = read_image(out_path)
    assert (img.width, img.height) == (2 * 20 + 3 * 25 + 2 * 20, 2 * 20 + 35)
    assert f"{img.width}x{img.height}" in out


def test_render_bad_text(tmp_path, capsys):
    code, _, _ = run(["render", "--text", "AB3", "--out", str(tmp_path / "x.pgm")], capsys)
    assert code == 3


def test_train_writes_model(tmp_path, capsys):
    path = tmp_path / "m.txt"
    code, out, _ = run(["train", "--out", str(path), "--goal", "0.1", "--hidden", "8"], capsys)
    assert code == 0
    assert "goal met: yes" in out
    assert neuralnet.load_model(path).hidden == 8


def test_train_goal_unmet_still_succeeds(tmp_path, capsys):
    path = tmp_path / "m.txt"
    code, out, _ = run(["train", "--out", str(path), "--max-epochs", "2"], capsys)
    assert code == 0 and "goal met: no" in out and path.exists()


def test_train_divergence_exit_code(tmp_path, capsys, monkeypatch):
    def boom(*a, **k):
        raise neuralnet.TrainingDiverged("non-finite weights")

    monkeypatch.setattr("hillocr.pipeline.train_model", boom)
    code, _, err = run(["train", "--out", str(tmp_path / "m.txt")], capsys)
    assert code == 5 and "non-finite" in err


def test_ocr_and_decode_image(tmp_path, key_file, model_file, capsys):
    img = str(tmp_path / "c.pgm")
    assert run(["encrypt-to-image", "--key", key_file, "--text", "HELPME", "--out", img], capsys)[0] == 0
    code, out, _ = run(["ocr", "--image", img, "--model", model_file], capsys)
    assert (code, out) == (0, "RORVWO\n")
    dump = tmp_path / "stages"
    code, out, _ = run(
        ["decode-image", "--image", img, "--model", model_file, "--key", key_file, "--dump-stages", str(dump)],
        capsys,
    )
    assert code == 0
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["recognized"] == "RORVWO"
    assert lines["plaintext"] == "HELPME"
    assert len(lines["confidence"].split()) == 6
    assert sorted(p.name for p in dump.iterdir())[0] == "00-gray.pgm"


def test_decode_image_selection(tmp_path, key_file, model_file, capsys):
    img = str(tmp_path / "r.pgm")
    run(["render", "--text", "QQRORVWOZZ", "--out", img], capsys)
    base = ["decode-image", "--image", img, "--model", model_file, "--key", key_file]
    code, out, _ = run(base + ["--skip", "2", "--take", "6", "--direct"], capsys)
    assert code == 0 and "plaintext: HELPME" in out
    code, _, err = run(base + ["--skip", "6", "--take", "6"], capsys)
    assert code == 3 and err.startswith("error:")


def test_decode_image_bad_image(tmp_path, key_file, model_file, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n2 2\n255\n\x00")
    code, _, err = run(["ocr", "--image", str(bad), "--model", model_file], capsys)
    assert code == 3 and "offset" in err


def test_encrypt_to_image_render_flags(tmp_path, capsys):
    key = tmp_path / "id.txt"
    save_key(HillKey.from_matrix([[1, 0], [0, 1]]), key)
    out_path = tmp_path / "o.pgm"
    code, _, _ = run(
        ["encrypt-to-image", "--key", str(key), "--text", "AB", "--out", str(out_path), "--margin", "5"], capsys
    )
    assert code == 0
    assert read_image(out_path).height == 10 + 70
