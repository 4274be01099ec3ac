#!/usr/bin/env python3
"""Generate workload descriptor JSON files from published layer shapes.

Regenerates everything under data/workloads/. Layer shapes follow the
standard ImageNet-era model definitions (torchvision for the CNNs) and the
published transformer configurations. Weights are 8-bit; activation counts
are per single inference at the canonical input size.

Usage: python3 tools/gen_workloads.py [outdir]
"""

import json
import os
import sys

WEIGHT_BITS = 8


def conv(name, in_c, out_c, k, in_hw, out_hw, groups=1):
    fan_in = (in_c // groups) * k * k
    fan_out = out_c
    weights = fan_in * fan_out if groups == 1 else k * k * out_c
    kind = "conv" if groups == 1 else "depthwise_conv"
    if groups != 1:
        fan_in, fan_out = k * k, out_c
    return {
        "name": name,
        "kind": kind,
        "fan_in": fan_in,
        "fan_out": fan_out,
        "weight_bits": WEIGHT_BITS,
        "macs": weights * out_hw * out_hw,
        "in_activations": in_c * in_hw * in_hw,
        "out_activations": out_c * out_hw * out_hw,
    }


def fc(name, fan_in, fan_out, tokens=1, kind="fc", extra_macs=0):
    return {
        "name": name,
        "kind": kind,
        "fan_in": fan_in,
        "fan_out": fan_out,
        "weight_bits": WEIGHT_BITS,
        "macs": fan_in * fan_out * tokens + extra_macs,
        "in_activations": fan_in * tokens,
        "out_activations": fan_out * tokens,
    }


def vgg16():
    cfgs = [
        ("conv1_1", 3, 64, 224, 224), ("conv1_2", 64, 64, 224, 224),
        ("conv2_1", 64, 128, 112, 112), ("conv2_2", 128, 128, 112, 112),
        ("conv3_1", 128, 256, 56, 56), ("conv3_2", 256, 256, 56, 56),
        ("conv3_3", 256, 256, 56, 56),
        ("conv4_1", 256, 512, 28, 28), ("conv4_2", 512, 512, 28, 28),
        ("conv4_3", 512, 512, 28, 28),
        ("conv5_1", 512, 512, 14, 14), ("conv5_2", 512, 512, 14, 14),
        ("conv5_3", 512, 512, 14, 14),
    ]
    layers = [conv(n, i, o, 3, ih, oh) for n, i, o, ih, oh in cfgs]
    layers += [fc("fc6", 25088, 4096), fc("fc7", 4096, 4096),
               fc("fc8", 4096, 1000)]
    return {"name": "vgg16", "layers": layers}


def alexnet():
    layers = [
        conv("conv1", 3, 64, 11, 224, 55),
        conv("conv2", 64, 192, 5, 27, 27),
        conv("conv3", 192, 384, 3, 13, 13),
        conv("conv4", 384, 256, 3, 13, 13),
        conv("conv5", 256, 256, 3, 13, 13),
        fc("fc6", 9216, 4096), fc("fc7", 4096, 4096), fc("fc8", 4096, 1000),
    ]
    return {"name": "alexnet", "layers": layers}


def resnet18():
    layers = [conv("conv1", 3, 64, 7, 224, 112)]

    def basic(stage, idx, in_c, out_c, hw, stride):
        blk = []
        in_hw = hw * stride
        blk.append(conv(f"layer{stage}.{idx}.conv1", in_c, out_c, 3, in_hw, hw))
        blk.append(conv(f"layer{stage}.{idx}.conv2", out_c, out_c, 3, hw, hw))
        if stride != 1 or in_c != out_c:
            blk.append(conv(f"layer{stage}.{idx}.down", in_c, out_c, 1, in_hw, hw))
        return blk

    plan = [(1, 64, 64, 56, 1), (2, 64, 128, 28, 2),
            (3, 128, 256, 14, 2), (4, 256, 512, 7, 2)]
    for stage, in_c, out_c, hw, stride in plan:
        layers += basic(stage, 0, in_c, out_c, hw, stride)
        layers += basic(stage, 1, out_c, out_c, hw, 1)
    layers.append(fc("fc", 512, 1000))
    return {"name": "resnet18", "layers": layers}


def resnet50():
    layers = [conv("conv1", 3, 64, 7, 224, 112)]

    def bottleneck(stage, idx, in_c, width, hw, stride):
        out_c = width * 4
        in_hw = hw * stride
        blk = [
            conv(f"layer{stage}.{idx}.conv1", in_c, width, 1, in_hw, in_hw),
            conv(f"layer{stage}.{idx}.conv2", width, width, 3, in_hw, hw),
            conv(f"layer{stage}.{idx}.conv3", width, out_c, 1, hw, hw),
        ]
        if stride != 1 or in_c != out_c:
            blk.append(conv(f"layer{stage}.{idx}.down", in_c, out_c, 1, in_hw, hw))
        return blk

    plan = [(1, 64, 64, 3, 56, 1), (2, 256, 128, 4, 28, 2),
            (3, 512, 256, 6, 14, 2), (4, 1024, 512, 3, 7, 2)]
    for stage, in_c, width, blocks, hw, stride in plan:
        layers += bottleneck(stage, 0, in_c, width, hw, stride)
        for b in range(1, blocks):
            layers += bottleneck(stage, b, width * 4, width, hw, 1)
    layers.append(fc("fc", 2048, 1000))
    return {"name": "resnet50", "layers": layers}


def mobilenetv3():
    # MobileNetV3-Large blocks: (exp, out, k, stride, se, out_hw)
    blocks = [
        (16, 16, 3, 1, False, 112),
        (64, 24, 3, 2, False, 56), (72, 24, 3, 1, False, 56),
        (72, 40, 5, 2, True, 28), (120, 40, 5, 1, True, 28),
        (120, 40, 5, 1, True, 28),
        (240, 80, 3, 2, False, 14), (200, 80, 3, 1, False, 14),
        (184, 80, 3, 1, False, 14), (184, 80, 3, 1, False, 14),
        (480, 112, 3, 1, True, 14), (672, 112, 3, 1, True, 14),
        (672, 160, 5, 2, True, 7), (960, 160, 5, 1, True, 7),
        (960, 160, 5, 1, True, 7),
    ]
    layers = [conv("conv_stem", 3, 16, 3, 224, 112)]
    in_c = 16
    for i, (exp, out_c, k, stride, se, hw) in enumerate(blocks):
        in_hw = hw * stride
        if exp != in_c:
            layers.append(conv(f"block{i}.expand", in_c, exp, 1, in_hw, in_hw))
        layers.append(conv(f"block{i}.dw", exp, exp, k, in_hw, hw, groups=exp))
        if se:
            red = max(8, exp // 4)
            layers.append(fc(f"block{i}.se_reduce", exp, red))
            layers.append(fc(f"block{i}.se_expand", red, exp))
        layers.append(conv(f"block{i}.project", exp, out_c, 1, hw, hw))
        in_c = out_c
    layers.append(conv("conv_head", 160, 960, 1, 7, 7))
    layers.append(fc("classifier.0", 960, 1280))
    layers.append(fc("classifier.3", 1280, 1000))
    return {"name": "mobilenetv3", "layers": layers}


def densenet201():
    growth, bn_width = 32, 4
    layers = [conv("conv0", 3, 64, 7, 224, 112)]
    c = 64
    plan = [(1, 6, 56), (2, 12, 28), (3, 48, 14), (4, 32, 7)]
    for stage, n, hw in plan:
        for i in range(n):
            layers.append(conv(f"block{stage}.{i}.conv1", c, growth * bn_width,
                               1, hw, hw))
            layers.append(conv(f"block{stage}.{i}.conv2", growth * bn_width,
                               growth, 3, hw, hw))
            c += growth
        if stage != 4:
            layers.append(conv(f"trans{stage}", c, c // 2, 1, hw, hw // 2))
            c //= 2
    layers.append(fc("classifier", 1920, 1000))
    return {"name": "densenet201", "layers": layers}


def vit_b16():
    d, tokens, blocks = 768, 197, 12
    layers = [conv("patch_embed", 3, d, 16, 224, 14)]
    attn_macs = 2 * tokens * tokens * d
    for i in range(blocks):
        layers.append(fc(f"block{i}.qkv", d, 3 * d, tokens, kind="attention",
                         extra_macs=attn_macs))
        layers.append(fc(f"block{i}.proj", d, d, tokens, kind="attention"))
        layers.append(fc(f"block{i}.mlp1", d, 4 * d, tokens))
        layers.append(fc(f"block{i}.mlp2", 4 * d, d, tokens))
    layers.append(fc("head", d, 1000))
    return {"name": "vit_b16", "layers": layers}


def mobilebert():
    hidden, intra, tokens, blocks = 512, 128, 128, 24
    layers = [fc("embedding", 30522, 128, 1)]
    layers.append(fc("embed_transform", 384, hidden, tokens))
    attn_macs = 2 * tokens * tokens * intra
    for i in range(blocks):
        layers.append(fc(f"block{i}.qkv", hidden, 3 * intra, tokens,
                         kind="attention", extra_macs=attn_macs))
        layers.append(fc(f"block{i}.attn_out", intra, intra, tokens,
                         kind="attention"))
        layers.append(fc(f"block{i}.bottleneck_in", hidden, intra, tokens))
        for f in range(4):
            layers.append(fc(f"block{i}.ffn{f}.up", intra, hidden, tokens))
            layers.append(fc(f"block{i}.ffn{f}.down", hidden, intra, tokens))
        layers.append(fc(f"block{i}.bottleneck_out", intra, hidden, tokens))
    layers.append(fc("pooler", hidden, hidden, 1))
    return {"name": "mobilebert", "layers": layers}


def gpt2_medium():
    d, tokens, blocks = 1024, 1024, 24
    layers = []
    attn_macs = 2 * tokens * tokens * d
    for i in range(blocks):
        layers.append(fc(f"block{i}.qkv", d, 3 * d, tokens, kind="attention",
                         extra_macs=attn_macs))
        layers.append(fc(f"block{i}.proj", d, d, tokens, kind="attention"))
        layers.append(fc(f"block{i}.mlp1", d, 4 * d, tokens))
        layers.append(fc(f"block{i}.mlp2", 4 * d, d, tokens))
    # Tied token embedding applied as the output head matmul.
    layers.append(fc("lm_head", d, 50257, tokens))
    return {"name": "gpt2_medium", "layers": layers}


MODELS = [resnet18, vgg16, alexnet, mobilenetv3, resnet50, densenet201,
          vit_b16, mobilebert, gpt2_medium]
SETS = {
    "cnn4": ["resnet18", "vgg16", "alexnet", "mobilenetv3"],
    "all9": ["resnet18", "vgg16", "alexnet", "mobilenetv3", "mobilebert",
             "densenet201", "resnet50", "vit_b16", "gpt2_medium"],
}


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(__file__), "..", "data", "workloads")
    os.makedirs(outdir, exist_ok=True)
    by_name = {}
    for build in MODELS:
        w = build()
        by_name[w["name"]] = w
        path = os.path.join(outdir, w["name"] + ".json")
        with open(path, "w") as f:
            json.dump(w, f, indent=1)
            f.write("\n")
        total_w = sum(l["fan_in"] * l["fan_out"] for l in w["layers"])
        largest = max(l["fan_in"] * l["fan_out"] for l in w["layers"])
        total_m = sum(l["macs"] for l in w["layers"])
        print(f"{w['name']:>14}: {len(w['layers']):3d} layers, "
              f"{total_w/1e6:8.2f}M weights, largest {largest/1e6:7.2f}M, "
              f"{total_m/1e9:8.2f}G MACs")
    for set_name, names in SETS.items():
        path = os.path.join(outdir, set_name + ".json")
        with open(path, "w") as f:
            json.dump([by_name[n] for n in names], f, indent=1)
            f.write("\n")
        print(f"{set_name}: {names}")


if __name__ == "__main__":
    main()
