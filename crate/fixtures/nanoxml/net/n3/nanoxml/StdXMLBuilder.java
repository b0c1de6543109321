package net.n3.nanoxml;

import java.util.Stack;

public class StdXMLBuilder {
    private Stack stack;
    private Object root;

    public StdXMLBuilder() {
        this.stack = null;
        this.root = null;
    }

    public void startBuilding(String systemID, int lineNr) {
        this.stack = new Stack();
        this.root = null;
    }

    public Object getResult(){ return this.root; }
}
