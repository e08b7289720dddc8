extern int counter;
void bump(int by);
int nondet_int();

int main()
{
  int n = nondet_int();
  __CPROVER_assume(n >= 0 && n < 4);
  for(int i = 0; i < n; i++)
    bump(2);
  assert(counter == 2 * n);
  assert(counter != 6);
  return 0;
}
