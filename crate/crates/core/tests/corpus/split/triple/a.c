extern int state;

void step_a()
{
  if(state == 0)
    state = 1;
}
