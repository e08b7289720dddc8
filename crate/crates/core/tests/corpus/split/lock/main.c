_Bool lock();
void unlock();
unsigned int nondet_unsigned_int();

int main()
{
  unsigned got_lock = 0;
  unsigned times = nondet_unsigned_int();

  while(times > 0)
  {
    if(lock())
    {
      got_lock++;
    }

    if(got_lock != 0)
      unlock();

    got_lock--;
    times--;
  }
}
