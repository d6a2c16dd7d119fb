"""Dense-sampling oracle for the boundary Besov seminorm on the unit square.

f = sin(2 pi s / L) with L = 4, s = 1/2, p = 2. The double sum uses chordal
distance and drops pairs closer than one panel, sampled ten times finer than
the coarse grid (h = 1/16) used by the test.
"""
import numpy as np


def square_trace(n_per_edge):
    t = np.arange(n_per_edge) / n_per_edge
    pts = np.concatenate([
        np.stack([t, np.zeros_like(t)], 1),
        np.stack([np.ones_like(t), t], 1),
        np.stack([1 - t, np.ones_like(t)], 1),
        np.stack([np.zeros_like(t), 1 - t], 1),
    ])
    arclength = np.arange(4 * n_per_edge) / n_per_edge
    return pts, arclength


def seminorm(n_per_edge, s=0.5, p=2.0):
    pts, arc = square_trace(n_per_edge)
    f = np.sin(2 * np.pi * arc / 4.0)
    w = 1.0 / n_per_edge
    diff = pts[:, None, :] - pts[None, :, :]
    r = np.sqrt((diff**2).sum(-1))
    mask = r >= w * (1 - 1e-9)
    num = np.abs(f[:, None] - f[None, :]) ** p
    vals = np.where(mask, num / np.where(mask, r, 1.0) ** (1 + s * p), 0.0)
    return (vals.sum() * w * w) ** (1 / p)


print("coarse (16 per edge):", repr(seminorm(16)))
print("reference (160 per edge):", repr(seminorm(160)))
