int quotient(int a, int b);
int remainder_of(int a, int b);
int nondet_int();

int main()
{
  int a = nondet_int();
  int b = nondet_int();
  __CPROVER_assume(a >= 0 && a < 100);
  int q = quotient(a, b);
  int r = remainder_of(a, b);
  assert(b <= 0 || q <= a);
  assert(r != 7);
  return 0;
}
