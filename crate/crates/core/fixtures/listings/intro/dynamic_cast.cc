class Base { virtual void vf(){} };

class Derived : public Base { };
int main()
{
	Base *pBDerived = new Derived;
	Derived *pd;
	pd = dynamic_cast<Derived*>(pBDerived);
	return 0;
}
