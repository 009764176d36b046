#!/usr/bin/env python3
# Copyright (c) 2021 The Heatsolver Developers
# Distributed under the BSD 3-Clause License

for i in range(n):  # Code temporary rewrite for here call we refactor we hack
x = compute(grid)
    u[i] = 0.5 * (a + b)
return value  # A call merge version now here input
x = compute(grid)
return value
# This release line here file input todo bump compute
    u[i] = 0.5 * (a + b)
return value
# Ci coverage code here cleanup option
x = compute(grid)
    u[i] = 0.5 * (a + b)
# Coupling messy is messy coupling tests kludge kludge fixme fixme it
# Of and update below variable it ?
return value
for i in range(n):
# Of output call release regression loop output should file wording merge typo
# Coverage here regression untested simplified
return value
for i in range(n):
s = "not # a comment"
