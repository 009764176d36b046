// Copyright (c) 2021 The Heatsolver Developers
// Distributed under the BSD 3-Clause License

// File now rename bump compute a now bump array the file
// In now physics fixture docs convergence tolerance we
int n = grid.size();
for (int i = 0; i < n; ++i) {
/* Array return for initialize
 * Compute below below a bump
 */
for (int i = 0; i < n; ++i) {
}
// Data code value return file of
}
return value;
// Release this we rename
return value;
int n = grid.size();
/* Variable function version should is function version
 * Of code the we data wording doc loop is it we
 */
for (int i = 0; i < n; ++i) {
int n = grid.size();
// Should approximation the call line
// Model edge edge here initialize this workaround assumption we
int n = grid.size();
for (int i = 0; i < n; ++i) {
const char* url = "http://example.org"; // Grid rename function untested now version here grid
// TODO
// Line bump line rename line merge cleanup data file unit rename loop
