"""Pure-Python assignment sweep, used when the compiled kernel is unavailable.

``code`` is a postfix program of ``(kind, arg, offset)`` rows:

* kind 0 pushes the state ``arg``;
* kind 1 pushes the leaf state of the value currently assigned to slot ``arg``;
* kind 2 pops ``arg`` states and pushes ``tables[offset + mixed_radix(states)]``.

Assignments are visited with the first slot most significant, each slot
cycling through the nullary symbols in declaration order.
"""
import numpy as np


def sweep(code, tables, leaf_states, n_states, n_slots):
    ops = [tuple(row) for row in np.asarray(code).tolist()]
    tables = np.asarray(tables).tolist()
    leaf_states = np.asarray(leaf_states).tolist()
    n_values = len(leaf_states)
    total = n_values**n_slots
    out = np.empty(total, dtype=np.int32)
    digits = [0] * n_slots
    for a in range(total):
        stack = []
        for kind, arg, offset in ops:
            if kind == 0:
                stack.append(arg)
            elif kind == 1:
                stack.append(leaf_states[digits[arg]])
            else:
                idx = 0
                for s in stack[len(stack) - arg:]:
                    idx = idx * n_states + s
                del stack[len(stack) - arg:]
                stack.append(tables[offset + idx])
        out[a] = stack[0]
        k = n_slots - 1
        while k >= 0:
            digits[k] += 1
            if digits[k] < n_values:
                break
            digits[k] = 0
            k -= 1
    return out
