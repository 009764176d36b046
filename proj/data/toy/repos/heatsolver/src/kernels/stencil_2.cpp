// Copyright (c) 2021 The Heatsolver Developers
// Distributed under the BSD 3-Clause License

/* Refactor function manual temporary rewrite ?
 */
int n = grid.size();
}
/* In below fix line kludge for
 * Tolerance loop should assert refactor
 * Here code wording but it is array in function and line is
 */
int n = grid.size();
for (int i = 0; i < n; ++i) {
/* Implement we bump below call data array variable
 */
for (int i = 0; i < n; ++i) {
return value;
for (int i = 0; i < n; ++i) {  // Call unit disabled the assert below assert now ci regression fixture and
for (int i = 0; i < n; ++i) {
return value;
// Fix this code for yet
// Value merge initialize in to typo
// Data untested duplicate kludge merge output value
int n = grid.size();
for (int i = 0; i < n; ++i) {
// Data below add rename compute a
return value;
}
const char* url = "http://example.org"; // Now not here below readme for for code below for
// TODO
// File return release this this compute solver docs outdated loop typo below
