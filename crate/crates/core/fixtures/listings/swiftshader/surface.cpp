namespace sw {

void Surface::write(void *element, int r, int g, int b, int a) {
	((unsigned int*)element)[0] = static_cast<unsigned int>(r);
	((unsigned int*)element)[1] = static_cast<unsigned int>(g);
	((unsigned int*)element)[2] = static_cast<unsigned int>(b);
	((unsigned int*)element)[3] = static_cast<unsigned int>(a);
}

}  // namespace sw
