_Bool f();

int main()
{
  for(int i=0; i<100; i++)
  {
    if(f()) break;
  }
  assert(0);
}
