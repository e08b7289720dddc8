unsigned sum_to(unsigned n);
unsigned nondet_unsigned();

int main()
{
  unsigned n = nondet_unsigned();
  __CPROVER_assume(n <= 5);
  unsigned s = sum_to(n);
  assert(2 * s == n * (n + 1));
  assert(s < 15);
  return 0;
}
