extern int table[8];
int lookup(int i);
int nondet_int();

int main()
{
  int i = nondet_int();
  __CPROVER_assume(i >= 0 && i <= 8);
  int v = lookup(i);
  table[i - 1] = 0;
  assert(v > 0);
  return v;
}
