package shop;

public class Customer {
    private String name;
    private int visits;
    private double balance;

    public String describe() {
        return name + " (" + visits + ")";
    }

    public void charge(double amount) {
        balance = balance + amount;
    }
}
