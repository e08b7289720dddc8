extern int state;

void step_b()
{
  if(state == 1)
    state = 2;
  else
    state = 0;
}
