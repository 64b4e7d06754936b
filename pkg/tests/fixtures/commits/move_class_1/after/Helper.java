class Helper {
    static int half(int v) {
        return v / 2;
    }
}
