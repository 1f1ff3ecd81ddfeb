#!/usr/bin/env python3
"""Independent numpy oracle for the LSTM forward pass.

Builds a tiny model (V=3, H=2) whose weights follow a closed-form integer
recipe that the Rust test reproduces, runs the documented two-step forward
from zero state, and prints the output distribution and cross-entropy to
full precision. These numbers get frozen into the Rust unit tests.
"""
import numpy as np

V, H = 3, 2


def mat(rows, cols, salt):
    m = np.empty((rows, cols))
    for r in range(rows):
        for c in range(cols):
            m[r, c] = ((r * 31 + c * 17 + salt) % 13 - 6) / 10.0
    return m


def vec(n, salt):
    v = np.empty(n)
    for r in range(n):
        v[r] = ((r * 7 + salt) % 5 - 2) / 10.0
    return v


Wi, bi = mat(H, V + H, 1), vec(H, 2)
Wf, bf = mat(H, V + H, 3), vec(H, 4)
Wo, bo = mat(H, V + H, 5), vec(H, 6)
Wg, bg = mat(H, V + H, 7), vec(H, 8)
Why, by = mat(V, H, 9), vec(V, 10)


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def step(x_id, h, c):
    z = np.zeros(V + H)
    z[x_id] = 1.0
    z[V:] = h
    i = sigmoid(Wi @ z + bi)
    f = sigmoid(Wf @ z + bf)
    o = sigmoid(Wo @ z + bo)
    g = np.tanh(Wg @ z + bg)
    c = f * c + i * g
    h = o * np.tanh(c)
    return h, c


def forward(ctx):
    h = np.zeros(H)
    c = np.zeros(H)
    for x in ctx:
        h, c = step(x, h, c)
    logits = Why @ h + by
    e = np.exp(logits - logits.max())
    return e / e.sum()


for ctx in [(1, 2), (0, 0), (2, 1)]:
    p = forward(ctx)
    print(f"ctx {ctx}: " + " ".join(f"{x:.17e}" for x in p))

p = forward((1, 2))
print(f"ce target0 ctx(1,2): {-np.log(p[0]):.17e}")

# mean CE over a tiny fixed batch, for the train-loss bookkeeping test
batch = [((1, 2), 0), ((0, 0), 2), ((2, 1), 1)]
ce = 0.0
for ctx, tgt in batch:
    ce += -np.log(forward(ctx)[tgt])
print(f"mean ce batch: {ce / len(batch):.17e}")
