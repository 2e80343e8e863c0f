#include <cstdio>
int main() { std::puts("pmtdyn: not wired up yet"); return 0; }
