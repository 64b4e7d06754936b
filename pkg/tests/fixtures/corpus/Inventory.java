public class Inventory {
    private int total;

    public void add(int quantity) {
        total = total + quantity;
    }

    public int report() {
        return total;
    }
}
