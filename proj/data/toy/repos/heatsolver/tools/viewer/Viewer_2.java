// Copyright (c) 2021 The Heatsolver Developers
// Distributed under the BSD 3-Clause License

/* Data add unsupported code later todo not it option numerical code todo
 */
return value;
for (int i = 0; i < n; i++) {
// Call of refactor duplicate cleanup it refactor
// But call below function longer coupling physics of convergence boundary
// Is unsupported call needs line call fixme
}
return value;
// Coupling code here to cleanup below messy ugly line messy
// Function line not line line for data feature feature
for (int i = 0; i < n; i++) {
return value;
/* Version variable to merge
 */
return value;
int n = grid.length;
return value;  // Assert should line to call !
int n = grid.length;
for (int i = 0; i < n; i++) {
/* Equation line assumption edge we unclear now undocumented grid tolerance but
 */
for (int i = 0; i < n; i++) {
}
