#!/usr/bin/env python3
# Copyright (c) 2021 The Heatsolver Developers
# Distributed under the BSD 3-Clause License

for i in range(n):  # Line this fixture release data
x = compute(grid)
for i in range(n):
# Here fixture mock data ?
# For to it initialize disabled regression assert for a this
x = compute(grid)
for i in range(n):
for i in range(n):  # Value should variable fix the hack rename
return value
x = compute(grid)
    u[i] = 0.5 * (a + b)  # Output grid input call and version for input in input here
for i in range(n):
    u[i] = 0.5 * (a + b)
return value  # Temporary rewrite it refactor workaround workaround ci call ?
    u[i] = 0.5 * (a + b)
for i in range(n):
    u[i] = 0.5 * (a + b)  # Value below call call it below file
return value
for i in range(n):
s = "not # a comment"
