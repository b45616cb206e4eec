"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 data/format error, 4 key not
invertible mod 26, 5 training diverged.
"""

from __future__ import annotations

import argparse
import sys

from . import hill, neuralnet, pipeline, raster
from .zmod import NotInvertible

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_KEY = 4
EXIT_DIVERGED = 5


def _render_spec(args) -> raster.RenderSpec:
    return raster.RenderSpec(scale=args.scale, spacing=args.spacing, margin=args.margin, per_row=args.per_row)


def _add_render_flags(p):
    d = raster.RenderSpec()
    p.add_argument("--scale", type=int, default=d.scale, help="pixels per font cell")
    p.add_argument("--spacing", type=int, default=d.spacing, help="pixels between glyphs and rows")
    p.add_argument("--margin", type=int, default=d.margin)
    p.add_argument("--per-row", type=int, default=d.per_row, help="glyphs per text row")


def cmd_keygen(args):
    key = hill.keygen(args.n, args.seed)
    hill.save_key(key, args.out)
    print(f"wrote {args.n}x{args.n} key to {args.out} (det {key.det})")


def cmd_inspect_key(args):
    key = hill.load_key(args.key)
    print(f"n: {key.n}")
    print(f"det mod 26: {key.det}")
    print("unit: yes")
    print("inverse:")
    for row in key.inverse.rows:
        print(" ".join(str(v) for v in row))


def cmd_encrypt(args):
    print(hill.encrypt(args.text, hill.load_key(args.key)))


def cmd_decrypt(args):
    print(hill.decrypt(args.text.replace(" ", ""), hill.load_key(args.key)))


def cmd_render(args):
    img = raster.render_text(args.text, spec=_render_spec(args))
    raster.write_image(img, args.out)
    print(f"wrote {img.width}x{img.height} image to {args.out}")


def cmd_train(args):
    cfg = neuralnet.TrainConfig(goal=args.goal, max_epochs=args.max_epochs, seed=args.seed, trainer=args.trainer)
    data = pipeline.build_corpus(copies=args.copies, noise=args.noise, seed=args.seed)
    res = pipeline.train_model(data, hidden=args.hidden, cfg=cfg)
    neuralnet.save_model(res.net, args.out)
    print(f"epochs: {res.epochs}")
    print(f"mse: {res.final_mse:.7f}")
    print(f"goal met: {'yes' if res.goal_met else 'no'}")


def cmd_ocr(args):
    img = raster.read_image(args.image)
    print(pipeline.ocr_image(img, neuralnet.load_model(args.model), direct=args.direct))


def cmd_decode_image(args):
    report = pipeline.decode_image(
        raster.read_image(args.image),
        neuralnet.load_model(args.model),
        hill.load_key(args.key),
        skip=args.skip,
        take=args.take,
        min_confidence=args.min_confidence,
        direct=args.direct,
        dump_dir=args.dump_stages,
    )
    print(f"recognized: {report.recognized}")
    print("confidence: " + " ".join(f"{c:.4f}" for c in report.confidences))
    print(f"ciphertext: {report.ciphertext}")
    print(f"plaintext: {report.plaintext}")


def cmd_encrypt_to_image(args):
    key = hill.load_key(args.key)
    img = pipeline.encrypt_to_image(args.text, key, _render_spec(args), args.out)
    print(f"wrote {img.width}x{img.height} image to {args.out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hillocr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a random invertible key")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("inspect-key", help="print determinant and inverse of a key")
    p.add_argument("--key", required=True)
    p.set_defaults(func=cmd_inspect_key)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = sub.add_parser(name)
        p.add_argument("--key", required=True)
        p.add_argument("--text", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("render", help="render text to a P5 image")
    p.add_argument("--text", required=True)
    p.add_argument("--out", required=True)
    _add_render_flags(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("train", help="train the glyph classifier on rendered letters")
    p.add_argument("--out", required=True)
    p.add_argument("--hidden", type=int, default=neuralnet.DEFAULT_HIDDEN)
    p.add_argument("--copies", type=int, default=4)
    p.add_argument("--noise", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--goal", type=float, default=0.001)
    p.add_argument("--max-epochs", type=int, default=5000)
    p.add_argument("--trainer", choices=("adaptive", "momentum"), default="adaptive")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("ocr", help="recognize the letters in an image")
    p.add_argument("--image", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--direct", action="store_true", help="label the thresholded image without edge/dilate/fill")
    p.set_defaults(func=cmd_ocr)

    p = sub.add_parser("decode-image", help="recognize and decrypt the message in an image")
    p.add_argument("--image", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--skip", type=int, default=0)
    p.add_argument("--take", type=int, default=None)
    p.add_argument("--min-confidence", type=float, default=None)
    p.add_argument("--dump-stages", metavar="DIR", default=None)
    p.add_argument("--direct", action="store_true")
    p.set_defaults(func=cmd_decode_image)

    p = sub.add_parser("encrypt-to-image", help="encrypt text and render the ciphertext")
    p.add_argument("--key", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--out", required=True)
    _add_render_flags(p)
    p.set_defaults(func=cmd_encrypt_to_image)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except NotInvertible as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_KEY
    except neuralnet.TrainingDiverged as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
