#!/usr/bin/env python3
# Copyright (c) 2021 The Heatsolver Developers
# Distributed under the BSD 3-Clause License

    u[i] = 0.5 * (a + b)  # Here fix grid call variable release call we loop for value
return value
for i in range(n):
return value  # Precision equation edge precision outdated numerical correct
    u[i] = 0.5 * (a + b)
x = compute(grid)
for i in range(n):  # Boundary precision of of numerical but accuracy
for i in range(n):
    u[i] = 0.5 * (a + b)
# Below this the docs
x = compute(grid)
    u[i] = 0.5 * (a + b)
x = compute(grid)  # Grid line variable typo input in now grid grid solver fix
x = compute(grid)
return value
for i in range(n):  # Add needs implement document add line the todo support but is
    u[i] = 0.5 * (a + b)
x = compute(grid)
s = "not # a comment"
