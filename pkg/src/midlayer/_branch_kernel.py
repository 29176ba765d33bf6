"""Compiled in/out branching over multi-word bitsets (primary MIS engine).

A search frame is three bitsets: ``inc`` (chosen vertices), ``und``
(undecided) and ``exc`` (excluded but not yet dominated). Frames live on an
explicit stack so a run can stop at a node cap or when an output buffer is
full, and resume later from the same arrays.
"""

import numpy as np
from numba import njit

STATUS_DONE = 0
STATUS_BUDGET = 1
STATUS_BUFFER_FULL = 2


def adjacency_words(adj, num_vertices):
    """Pack Python-int adjacency rows into a ``(V, W)`` uint64 array."""
    words = max(1, (num_vertices + 63) // 64)
    out = np.zeros((max(num_vertices, 1), words), dtype=np.uint64)
    for v, row in enumerate(adj):
        for w in range(words):
            out[v, w] = (row >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def words_to_int(row):
    value = 0
    for w in range(len(row) - 1, -1, -1):
        value = (value << 64) | int(row[w])
    return value


def int_to_words(value, words):
    out = np.zeros(words, dtype=np.uint64)
    for w in range(words):
        out[w] = (value >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def new_stack(num_vertices, words, initial=()):
    """Stack arrays with capacity for a full-depth search plus ``initial`` frames.

    Each initial frame is ``(inc, und, exc, depth)`` with int bitsets.
    """
    cap = num_vertices + 2 + len(initial)
    stack = np.zeros((cap, 3, words), dtype=np.uint64)
    depth = np.zeros(cap, dtype=np.int64)
    # first frame popped is the last pushed, so push in reverse
    for slot, (inc, und, exc, dep) in enumerate(reversed(initial)):
        stack[slot, 0] = int_to_words(inc, words)
        stack[slot, 1] = int_to_words(und, words)
        stack[slot, 2] = int_to_words(exc, words)
        depth[slot] = dep
    return stack, depth


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _lowest(x):
    # index of lowest set bit of a nonzero word
    return _popcount((x & (~x + np.uint64(1))) - np.uint64(1))


@njit(cache=True)
def run(adj, stack, depth, sp, node_cap, split_depth, by_size, out, out_cap, frames_out, frames_cap):
    """Process frames until the stack empties or a limit is hit.

    Returns ``(status, sp, nodes, n_out, n_frames)``. When ``out_cap > 0``
    every maximal set found is copied into ``out``; when ``split_depth >= 0``
    frames reaching that many branching decisions are copied into
    ``frames_out`` (with their depth in the last row slot) instead of being
    expanded, and shallow leaves are copied there too so that the frame list
    preserves depth-first order.
    """
    words = adj.shape[1]
    nodes = 0
    n_out = 0
    n_frames = 0
    inc = np.empty(words, dtype=np.uint64)
    und = np.empty(words, dtype=np.uint64)
    exc = np.empty(words, dtype=np.uint64)
    while sp > 0:
        if nodes >= node_cap:
            return STATUS_BUDGET, sp, nodes, n_out, n_frames
        if out_cap > 0 and n_out >= out_cap:
            return STATUS_BUFFER_FULL, sp, nodes, n_out, n_frames
        if split_depth >= 0 and n_frames >= frames_cap:
            return STATUS_BUFFER_FULL, sp, nodes, n_out, n_frames
        sp -= 1
        dep = depth[sp]
        for w in range(words):
            inc[w] = stack[sp, 0, w]
            und[w] = stack[sp, 1, w]
            exc[w] = stack[sp, 2, w]
        if split_depth >= 0 and dep >= split_depth:
            for w in range(words):
                frames_out[n_frames, 0, w] = inc[w]
                frames_out[n_frames, 1, w] = und[w]
                frames_out[n_frames, 2, w] = exc[w]
            frames_out[n_frames, 3, 0] = np.uint64(dep)
            n_frames += 1
            continue
        nodes += 1
        dead = False
        while True:
            # every excluded, undominated vertex needs an undecided neighbor
            for w in range(words):
                x = exc[w]
                while x:
                    b = _lowest(x)
                    x &= x - np.uint64(1)
                    v = w * 64 + b
                    ok = False
                    for t in range(words):
                        if adj[v, t] & und[t]:
                            ok = True
                            break
                    if not ok:
                        dead = True
                        break
                if dead:
                    break
            if dead:
                break
            v = -1
            for w in range(words):
                if und[w]:
                    v = w * 64 + _lowest(und[w])
                    break
            if v < 0:
                break
            free = False
            for t in range(words):
                if adj[v, t] & und[t]:
                    free = True
                    break
            if free:
                break
            # no undecided neighbor: excluding v could never be repaired
            inc[v // 64] |= np.uint64(1) << np.uint64(v % 64)
            und[v // 64] &= ~(np.uint64(1) << np.uint64(v % 64))
            for t in range(words):
                exc[t] &= ~adj[v, t]
        if dead:
            continue
        if v < 0:
            if split_depth >= 0:
                for w in range(words):
                    frames_out[n_frames, 0, w] = inc[w]
                    frames_out[n_frames, 1, w] = und[w]
                    frames_out[n_frames, 2, w] = exc[w]
                frames_out[n_frames, 3, 0] = np.uint64(dep)
                n_frames += 1
                continue
            size = 0
            for w in range(words):
                size += _popcount(inc[w])
            by_size[size] += 1
            if out_cap > 0:
                for w in range(words):
                    out[n_out, w] = inc[w]
                n_out += 1
            continue
        vw = v // 64
        vb = np.uint64(1) << np.uint64(v % 64)
        # exclude branch, pushed first so the include branch is explored first
        for w in range(words):
            stack[sp, 0, w] = inc[w]
            stack[sp, 1, w] = und[w]
            stack[sp, 2, w] = exc[w]
        stack[sp, 1, vw] &= ~vb
        stack[sp, 2, vw] |= vb
        depth[sp] = dep + 1
        sp += 1
        for w in range(words):
            stack[sp, 0, w] = inc[w]
            stack[sp, 1, w] = und[w] & ~adj[v, w]
            stack[sp, 2, w] = exc[w] & ~adj[v, w]
        stack[sp, 0, vw] |= vb
        stack[sp, 1, vw] &= ~vb
        depth[sp] = dep + 1
        sp += 1
    return STATUS_DONE, sp, nodes, n_out, n_frames
