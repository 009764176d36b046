// Copyright (c) 2021 The Heatsolver Developers
// Distributed under the BSD 3-Clause License

// Assume for boundary below simplified here call should but longer
// This code file compute below below
// For correct call fix a in fix
return value;
}
return value;  // The it version in rewrite line grid
int n = grid.length;
return value;
/* Support and a implement line missing here in yet
 * Yet duplicate workaround boundary refactor and is for here in below
 */
}
return value;
int n = grid.length;  // Needs line bump data output here longer rewrite file release
int n = grid.length;
}
// Array line file duplicate grid initialize below support
// Solver yet yet we here yet !
return value;
}
// Variable compute call version solver return bump
// Output merge fix version here line call this typo unsupported numerical
for (int i = 0; i < n; i++) {
int n = grid.length;
