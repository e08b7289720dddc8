int state = 0;
void step_a();
void step_b();
_Bool nondet_bool();

int main()
{
  for(int i = 0; i < 3; i++)
  {
    if(nondet_bool())
      step_a();
    else
      step_b();
    assert(state <= 2);
  }
  assert(state != 2);
  return 0;
}
