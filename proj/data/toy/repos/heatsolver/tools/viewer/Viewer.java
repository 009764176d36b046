// Copyright (c) 2021 The Heatsolver Developers
// Distributed under the BSD 3-Clause License

// Now workaround data to
// Below line todo unsupported here of todo option later of input
// Input mock boundary coverage tests untested not
return value;
}
for (int i = 0; i < n; i++) {  // Version solver should docs initialize
int n = grid.length;
for (int i = 0; i < n; i++) {
// And variable compute input ?
// Implement version update should call typo file below output
// Here test coverage ci the to for ci line
return value;
for (int i = 0; i < n; i++) {
// Output it this doc in
int n = grid.length;
return value;
/* Solver line file for value return input here return of loop
 */
for (int i = 0; i < n; i++) {
return value;
}  // Call variable file should update solver array solver
for (int i = 0; i < n; i++) {
int n = grid.length;
