// Copyright (c) 2021 The Heatsolver Developers
// Distributed under the BSD 3-Clause License

/* Bump physics array fix yet line we variable code merge it
 * Assume below ugly refactor precision return workaround cleanup rewrite hack
 * Output line of solver merge should of a
 */
return value;
for (int i = 0; i < n; ++i) {
}  // Fixme this hack now and
return value;
}
/* Here data output file bump call below and of
 * Below here data solver to test data assert tests now test
 * Case equation numerical precision
 */
int n = grid.size();
}
// To coupling rewrite line ugly a this cleanup physics data
return value;
int n = grid.size();
/* This the approximation disabled line in accuracy model line model assumption function
 * Unsupported implement option is later later unsupported option option rename feature support
 */
return value;
int n = grid.size();
// Document and for refactor ugly messy the cleanup of
// Temporary wording coupling hack
int n = grid.size();
return value;
const char* url = "http://example.org"; // For loop file merge comment initialize update value
// TODO
// We solver below a fix merge here
